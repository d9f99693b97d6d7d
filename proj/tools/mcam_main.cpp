#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcamsim/bench.hpp"
#include "mcamsim/config.hpp"

namespace fs = std::filesystem;
using namespace mcamsim;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
};

KvConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) return {};
    return load_kv_file(opts.config_path);
}

CamConfig make_cam(int bits, const KvConfig& kv, TimingParams& timing) {
    CamConfig cam = default_cam(bits);
    if (!kv.empty()) apply_config(kv, cam, timing);
    return cam;
}

void add_kv(ConfigFingerprint& fp, const KvConfig& kv) {
    for (const auto& [key, value] : kv) fp.set("cfg." + key, value);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<BackendSpec> parse_backend_list(const std::string& names) {
    std::vector<BackendSpec> out;
    std::istringstream ss(names);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(parse_backend(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty backend list");
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    return out;
}

int cmd_build_lut(const CommonOpts& common, int bits) {
    const KvConfig kv = load_config(common);
    TimingParams timing;
    const CamConfig cam = make_cam(bits, kv, timing);
    const ConductanceLut lut = build_lut(cam);

    ConfigFingerprint fp;
    fp.set("cmd", std::string("build-lut"));
    fp.set("seed", common.seed);
    fp.add_cam(cam);
    fp.add_timing(timing);
    const std::string hash = fp.hash_hex();
    const std::string stamp = "config_hash=" + hash + " seed=" + std::to_string(common.seed);

    fs::create_directories(common.out_dir);
    const fs::path dir(common.out_dir);
    const std::string suffix = "_b" + std::to_string(bits);

    const fs::path csv_path = dir / ("lut" + suffix + ".csv");
    {
        auto out = open_out(csv_path);
        write_lut_csv(lut, out, {stamp});
    }
    const fs::path json_path = dir / ("lut" + suffix + ".json");
    {
        nlohmann::json j = nlohmann::json::parse(lut_to_json(lut));
        j["config_hash"] = hash;
        j["seed"] = common.seed;
        auto out = open_out(json_path);
        out << j.dump(2) << "\n";
    }
    const int n = 1 << bits;
    char buf[64];
    const fs::path dist_path = dir / ("distance_profile" + suffix + ".csv");
    {
        auto out = open_out(dist_path);
        out << "# " << stamp << "\n";
        out << "stored_state,distance,conductance_us\n";
        for (int s = 0; s < n; ++s) {
            const auto curve = lut_distance_curve(lut, s);
            for (size_t d = 0; d < curve.size(); ++d) {
                std::snprintf(buf, sizeof buf, "%d,%zu,%.6g", s, d, curve[d]);
                out << buf << "\n";
            }
        }
    }
    const fs::path deriv_path = dir / ("derivative_profile" + suffix + ".csv");
    {
        auto out = open_out(deriv_path);
        out << "# " << stamp << "\n";
        out << "stored_state,distance,delta_us\n";
        for (int s = 0; s < n; ++s) {
            const auto diff = lut_derivative_profile(lut, s);
            for (size_t d = 0; d < diff.size(); ++d) {
                std::snprintf(buf, sizeof buf, "%d,%zu,%.6g", s, d + 1, diff[d]);
                out << buf << "\n";
            }
        }
    }
    std::cout << stamp << "\n"
              << "wrote " << csv_path.string() << "\n"
              << "wrote " << json_path.string() << "\n"
              << "wrote " << dist_path.string() << "\n"
              << "wrote " << deriv_path.string() << "\n";
    return 0;
}

int cmd_classify(const CommonOpts& common, const std::vector<std::string>& data_paths,
                 const std::string& backend_names, double train_frac) {
    const KvConfig kv = load_config(common);
    const auto backends = parse_backend_list(backend_names);

    ConfigFingerprint fp;
    fp.set("cmd", std::string("classify"));
    fp.set("seed", common.seed);
    fp.set("train_frac", train_frac);
    fp.set("backends", backend_names);
    fp.set("data", join(data_paths));
    add_kv(fp, kv);

    RunReport report;
    report.seed = common.seed;
    report.config_hash = fp.hash_hex();
    for (const auto& path : data_paths) {
        const Dataset ds = load_csv(path);
        const auto [train, test] = split(ds, train_frac, common.seed);
        for (const auto& backend : backends) {
            TimingParams timing;
            const CamConfig cam = make_cam(backend.bits, kv, timing);
            ReportRow row;
            row.workload = ds.name;
            row.backend = backend_name(backend);
            row.accuracy = nn_classify(train, test, backend, common.seed + 1, cam);
            report.rows.push_back(row);
        }
    }
    fs::create_directories(common.out_dir);
    const fs::path out_path = fs::path(common.out_dir) / "classify_report.csv";
    {
        auto out = open_out(out_path);
        write_report_csv(report, out);
    }
    print_report(report, std::cout);
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

int cmd_fewshot(const CommonOpts& common, bool synthetic, const std::string& features_path,
                const EpisodeSpec& spec, const std::string& backend_names, int classes,
                int per_class, double spread) {
    const KvConfig kv = load_config(common);
    const auto backends = parse_backend_list(backend_names);

    ConfigFingerprint fp;
    fp.set("cmd", std::string("fewshot"));
    fp.set("seed", common.seed);
    fp.set("n_way", static_cast<std::uint64_t>(spec.n_way));
    fp.set("k_shot", static_cast<std::uint64_t>(spec.k_shot));
    fp.set("n_query", static_cast<std::uint64_t>(spec.n_query));
    fp.set("episodes", static_cast<std::uint64_t>(spec.episodes));
    fp.set("feature_dim", static_cast<std::uint64_t>(spec.feature_dim));
    fp.set("backends", backend_names);
    add_kv(fp, kv);

    ClassFeatures features;
    std::string source;
    if (synthetic) {
        features = synthetic_pool(classes, per_class, spec.feature_dim, spread, common.seed);
        source = "synthetic";
        fp.set("classes", static_cast<std::uint64_t>(classes));
        fp.set("per_class", static_cast<std::uint64_t>(per_class));
        fp.set("spread", spread);
    } else {
        features = load_class_features(features_path, spec.feature_dim);
        source = fs::path(features_path).stem().string();
        fp.set("features", features_path);
    }

    RunReport report;
    report.seed = common.seed;
    report.config_hash = fp.hash_hex();
    const std::string workload = source + "_" + std::to_string(spec.n_way) + "way_" +
                                 std::to_string(spec.k_shot) + "shot";
    for (const auto& backend : backends) {
        TimingParams timing;
        const CamConfig cam = make_cam(backend.bits, kv, timing);
        ReportRow row;
        row.workload = workload;
        row.backend = backend_name(backend);
        row.accuracy = run_episode(features, spec, backend, common.seed + 1, cam);
        report.rows.push_back(row);
    }
    fs::create_directories(common.out_dir);
    const fs::path out_path = fs::path(common.out_dir) / "fewshot_report.csv";
    {
        auto out = open_out(out_path);
        write_report_csv(report, out);
    }
    print_report(report, std::cout);
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

int cmd_sweep_variation(const CommonOpts& common, const std::string& data_path, int bits,
                        const std::string& sigma_list, int trials, double train_frac) {
    const KvConfig kv = load_config(common);
    std::vector<double> sigmas;
    {
        std::istringstream ss(sigma_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            try {
                size_t pos = 0;
                const double v = std::stod(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
                sigmas.push_back(v);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad sigma value '" + tok + "'");
            }
        }
        if (sigmas.empty()) throw std::invalid_argument("empty sigma list");
        for (double s : sigmas)
            if (s < 0.0) throw std::invalid_argument("sigma values must be >= 0");
    }
    TimingParams timing;
    const CamConfig cam = make_cam(bits, kv, timing);

    ConfigFingerprint fp;
    fp.set("cmd", std::string("sweep-variation"));
    fp.set("seed", common.seed);
    fp.set("train_frac", train_frac);
    fp.set("trials", static_cast<std::uint64_t>(trials));
    fp.set("sigmas", sigma_list);
    fp.set("data", data_path);
    fp.add_cam(cam);
    add_kv(fp, kv);
    const std::string stamp =
        "config_hash=" + fp.hash_hex() + " seed=" + std::to_string(common.seed);

    const Dataset ds = load_csv(data_path);
    const auto [train, test] = split(ds, train_frac, common.seed);
    const auto rows = variation_sweep(train, test, cam, sigmas, trials, common.seed);

    fs::create_directories(common.out_dir);
    const fs::path out_path = fs::path(common.out_dir) / "variation_sweep.csv";
    char buf[96];
    {
        auto out = open_out(out_path);
        out << "# " << stamp << "\n";
        out << "sigma_mv,mean_acc_pct,std_acc_pct\n";
        for (const auto& row : rows) {
            std::snprintf(buf, sizeof buf, "%g,%.4f,%.4f", row.sigma, row.mean_acc,
                          row.std_acc);
            out << buf << "\n";
        }
    }
    std::cout << stamp << "\n";
    std::cout << "dataset=" << ds.name << " bits=" << bits << " trials=" << trials << "\n";
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "sigma %5.1f mV: %6.2f%% +/- %.2f", row.sigma,
                      row.mean_acc, row.std_acc);
        std::cout << buf << "\n";
    }
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-bit CAM nearest-neighbor simulator"};
    app.require_subcommand(1);

    CommonOpts common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path,
                        "Flat key = value file with device/timing overrides");
        sub->add_option("--out-dir", common.out_dir, "Directory for output files")
            ->envname("MCAM_OUT_DIR")
            ->capture_default_str();
        sub->add_option("--seed", common.seed, "Run seed")->capture_default_str();
    };

    auto* lut_cmd = app.add_subcommand("build-lut", "Emit conductance tables and curves");
    int lut_bits = 3;
    lut_cmd->add_option("--bits", lut_bits, "Cell width in bits")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    add_common(lut_cmd);

    auto* classify_cmd =
        app.add_subcommand("classify", "Nearest-neighbor classification benchmark");
    std::vector<std::string> data_paths;
    std::string backend_names = "mcam3,tcam_lsh,cosine,euclidean,linf";
    double train_frac = 0.8;
    classify_cmd->add_option("--data", data_paths, "Dataset CSV path (repeatable)")
        ->required()
        ->expected(-1);
    classify_cmd->add_option("--backends", backend_names, "Comma-separated backend list")
        ->capture_default_str();
    classify_cmd->add_option("--train-frac", train_frac, "Training fraction")
        ->check(CLI::Range(0.05, 0.95))
        ->capture_default_str();
    add_common(classify_cmd);

    auto* fewshot_cmd = app.add_subcommand("fewshot", "Episodic few-shot benchmark");
    bool synthetic = false;
    std::string features_path;
    EpisodeSpec spec;
    int classes = 20;
    int per_class = 40;
    double spread = 0.65;
    std::string fs_backends = "mcam3,tcam_lsh,cosine,euclidean,linf";
    auto* syn_opt = fewshot_cmd->add_flag("--synthetic", synthetic,
                                          "Generate Gaussian-cluster features");
    fewshot_cmd->add_option("--features", features_path, "Per-class feature CSV")
        ->excludes(syn_opt);
    fewshot_cmd->add_option("--ways", spec.n_way, "Classes per episode")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    fewshot_cmd->add_option("--shots", spec.k_shot, "Support examples per class")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    fewshot_cmd->add_option("--queries", spec.n_query, "Queries per class per episode")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    fewshot_cmd->add_option("--episodes", spec.episodes, "Episode count")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    fewshot_cmd->add_option("--dim", spec.feature_dim, "Feature dimension")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    fewshot_cmd->add_option("--classes", classes, "Synthetic pool: class count")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    fewshot_cmd->add_option("--per-class", per_class, "Synthetic pool: vectors per class")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    fewshot_cmd->add_option("--spread", spread, "Synthetic pool: intra-class std dev")
        ->capture_default_str();
    fewshot_cmd->add_option("--backends", fs_backends, "Comma-separated backend list")
        ->capture_default_str();
    add_common(fewshot_cmd);

    auto* sweep_cmd =
        app.add_subcommand("sweep-variation", "Accuracy vs threshold variation");
    std::string sweep_data;
    int sweep_bits = 3;
    std::string sigma_list = "0,20,40,60,80";
    int trials = 50;
    double sweep_frac = 0.8;
    sweep_cmd->add_option("--data", sweep_data, "Dataset CSV path")->required();
    sweep_cmd->add_option("--bits", sweep_bits, "Cell width in bits")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    sweep_cmd->add_option("--sigmas", sigma_list, "Comma-separated sigma list (mV)")
        ->capture_default_str();
    sweep_cmd->add_option("--trials", trials, "Monte Carlo trials per sigma")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    sweep_cmd->add_option("--train-frac", sweep_frac, "Training fraction")
        ->check(CLI::Range(0.05, 0.95))
        ->capture_default_str();
    add_common(sweep_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lut_cmd->parsed()) return cmd_build_lut(common, lut_bits);
        if (classify_cmd->parsed())
            return cmd_classify(common, data_paths, backend_names, train_frac);
        if (fewshot_cmd->parsed()) {
            if (!synthetic && features_path.empty())
                throw std::invalid_argument("need --synthetic or --features <path>");
            return cmd_fewshot(common, synthetic, features_path, spec, fs_backends,
                               classes, per_class, spread);
        }
        if (sweep_cmd->parsed())
            return cmd_sweep_variation(common, sweep_data, sweep_bits, sigma_list, trials,
                                       sweep_frac);
    } catch (const std::exception& e) {
        std::cerr << "mcam: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
