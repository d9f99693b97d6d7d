#include "mcamsim/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mcamsim/stats.hpp"

namespace mcamsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Metric exact_metric(BackendSpec::Kind kind) {
    switch (kind) {
        case BackendSpec::Kind::cosine: return Metric::cosine;
        case BackendSpec::Kind::euclidean: return Metric::euclidean;
        case BackendSpec::Kind::linf: return Metric::linf;
        default: throw std::logic_error("not an exact metric backend");
    }
}

FeatureRanges ranges_or_compute(const Dataset& train) {
    if (!train.ranges.lo.empty()) return train.ranges;
    return compute_ranges(train.features);
}

}  // namespace

BackendSpec parse_backend(const std::string& name) {
    BackendSpec b;
    if (name == "tcam_lsh") { b.kind = BackendSpec::Kind::tcam_lsh; return b; }
    if (name == "cosine") { b.kind = BackendSpec::Kind::cosine; return b; }
    if (name == "euclidean") { b.kind = BackendSpec::Kind::euclidean; return b; }
    if (name == "linf") { b.kind = BackendSpec::Kind::linf; return b; }
    if (name.rfind("mcam", 0) == 0) {
        b.kind = BackendSpec::Kind::mcam;
        const std::string digits = name.substr(4);
        if (digits.empty()) return b;
        try {
            size_t pos = 0;
            b.bits = std::stoi(digits, &pos);
            if (pos == digits.size() && b.bits >= 1 && b.bits <= 8) return b;
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("unknown backend '" + name +
                                "' (valid: mcam<bits>, tcam_lsh, cosine, euclidean, linf)");
}

std::string backend_name(const BackendSpec& b) {
    switch (b.kind) {
        case BackendSpec::Kind::mcam: return "mcam" + std::to_string(b.bits);
        case BackendSpec::Kind::tcam_lsh: return "tcam_lsh";
        case BackendSpec::Kind::cosine: return "cosine";
        case BackendSpec::Kind::euclidean: return "euclidean";
        case BackendSpec::Kind::linf: return "linf";
    }
    throw std::logic_error("unreachable backend kind");
}

double nn_classify(const Dataset& train, const Dataset& test, const BackendSpec& backend,
                   std::uint64_t lsh_seed) {
    const CamConfig cam = backend.kind == BackendSpec::Kind::mcam
                              ? default_cam(backend.bits)
                              : default_cam(3);
    return nn_classify(train, test, backend, lsh_seed, cam);
}

double nn_classify(const Dataset& train, const Dataset& test, const BackendSpec& backend,
                   std::uint64_t lsh_seed, const CamConfig& cam) {
    if (train.size() == 0 || test.size() == 0)
        throw std::invalid_argument("nn_classify: empty train or test set");
    if (train.n_features() != test.n_features())
        throw std::invalid_argument("nn_classify: train has " +
                                    std::to_string(train.n_features()) +
                                    " features, test has " +
                                    std::to_string(test.n_features()));
    if (backend.kind == BackendSpec::Kind::mcam && cam.bits != backend.bits)
        throw std::invalid_argument("nn_classify: backend wants " +
                                    std::to_string(backend.bits) +
                                    "-bit cells, geometry is " +
                                    std::to_string(cam.bits) + "-bit");
    int correct = 0;
    switch (backend.kind) {
        case BackendSpec::Kind::mcam: {
            const FeatureRanges ranges = ranges_or_compute(train);
            const ConductanceLut lut = build_lut(cam);
            std::vector<Word> words(train.size());
            for (int r = 0; r < train.size(); ++r)
                words[r] = quantize(train.features[r], ranges, backend.bits);
            for (int i = 0; i < test.size(); ++i) {
                const Word q = quantize(test.features[i], ranges, backend.bits);
                int best = 0;
                double best_g = kInf;
                for (int r = 0; r < train.size(); ++r) {
                    const double g = row_conductance(q, words[r], lut);
                    if (g < best_g) {
                        best_g = g;
                        best = r;
                    }
                }
                if (train.labels[best] == test.labels[i]) ++correct;
            }
            break;
        }
        case BackendSpec::Kind::tcam_lsh: {
            const int n_bits = train.n_features();
            const LshEncoder enc = make_lsh_encoder(n_bits, train.n_features(), lsh_seed);
            std::vector<BitWord> sigs(train.size());
            for (int r = 0; r < train.size(); ++r)
                sigs[r] = lsh_encode(train.features[r], enc);
            for (int i = 0; i < test.size(); ++i) {
                const int best = nn_search_lsh(sigs, lsh_encode(test.features[i], enc));
                if (train.labels[best] == test.labels[i]) ++correct;
            }
            break;
        }
        default: {
            const Metric m = exact_metric(backend.kind);
            for (int i = 0; i < test.size(); ++i) {
                const int best = nn_search_baseline(m, train.features, test.features[i]);
                if (train.labels[best] == test.labels[i]) ++correct;
            }
            break;
        }
    }
    return 100.0 * correct / test.size();
}

ClassFeatures synthetic_pool(int classes, int per_class, int dim, double spread,
                             std::uint64_t seed) {
    if (classes < 1 || per_class < 1 || dim < 1)
        throw std::invalid_argument("synthetic_pool: counts must be positive");
    if (spread < 0.0)
        throw std::invalid_argument("synthetic_pool: spread must be non-negative");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> means(classes, std::vector<double>(dim));
    for (auto& mu : means)
        for (double& v : mu) v = gauss(rng);
    ClassFeatures out;
    for (int c = 0; c < classes; ++c) {
        auto& pool = out[c];
        pool.assign(per_class, std::vector<double>(dim));
        for (auto& x : pool)
            for (int j = 0; j < dim; ++j) x[j] = means[c][j] + spread * gauss(rng);
    }
    return out;
}

ClassFeatures load_class_features(const std::string& path, int feature_dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature file: " + path);
    ClassFeatures out;
    std::string line;
    int line_no = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cells.push_back(tok);
        if (first_data) {
            first_data = false;
            try {
                size_t pos = 0;
                (void)std::stoi(cells.at(0), &pos);
                if (pos != cells[0].size()) throw std::invalid_argument(cells[0]);
            } catch (const std::exception&) {
                continue;  // header row
            }
        }
        if (static_cast<int>(cells.size()) != feature_dim + 1)
            throw std::runtime_error("feature csv: line " + std::to_string(line_no) +
                                     " has " + std::to_string(cells.size()) +
                                     " cells, want class id + " +
                                     std::to_string(feature_dim) + " features");
        int cls = 0;
        std::vector<double> x(feature_dim);
        try {
            size_t pos = 0;
            cls = std::stoi(cells[0], &pos);
            if (pos != cells[0].size()) throw std::invalid_argument(cells[0]);
            for (int j = 0; j < feature_dim; ++j) {
                pos = 0;
                x[j] = std::stod(cells[j + 1], &pos);
                if (pos != cells[j + 1].size()) throw std::invalid_argument(cells[j + 1]);
            }
        } catch (const std::exception&) {
            throw std::runtime_error("feature csv: bad value on line " +
                                     std::to_string(line_no));
        }
        out[cls].push_back(std::move(x));
    }
    if (out.empty()) throw std::runtime_error("feature csv: no data rows in " + path);
    return out;
}

double run_episode(const ClassFeatures& features, const EpisodeSpec& spec,
                   const BackendSpec& backend, std::uint64_t seed) {
    const CamConfig cam = backend.kind == BackendSpec::Kind::mcam
                              ? default_cam(backend.bits)
                              : default_cam(3);
    return run_episode(features, spec, backend, seed, cam);
}

double run_episode(const ClassFeatures& features, const EpisodeSpec& spec,
                   const BackendSpec& backend, std::uint64_t seed,
                   const CamConfig& cam) {
    if (spec.n_way < 2 || spec.k_shot < 1 || spec.n_query < 1 || spec.episodes < 1)
        throw std::invalid_argument("episode spec: need n_way >= 2 and positive counts");
    if (static_cast<int>(features.size()) < spec.n_way)
        throw std::invalid_argument("episode spec: " + std::to_string(spec.n_way) +
                                    "-way needs at least that many classes, pool has " +
                                    std::to_string(features.size()));
    std::vector<int> class_ids;
    class_ids.reserve(features.size());
    for (const auto& [cls, pool] : features) {
        if (static_cast<int>(pool.size()) < spec.k_shot + spec.n_query)
            throw std::invalid_argument(
                "class " + std::to_string(cls) + " holds " + std::to_string(pool.size()) +
                " vectors, need k_shot + n_query = " +
                std::to_string(spec.k_shot + spec.n_query));
        for (const auto& x : pool)
            if (static_cast<int>(x.size()) != spec.feature_dim)
                throw std::invalid_argument("class " + std::to_string(cls) +
                                            " has a vector of length " +
                                            std::to_string(x.size()) + ", expected " +
                                            std::to_string(spec.feature_dim));
        class_ids.push_back(cls);
    }

    struct Episode {
        std::vector<const std::vector<double>*> support, query;
        std::vector<int> support_label, query_label;
    };
    std::mt19937_64 rng(seed);
    std::vector<Episode> episodes(spec.episodes);
    for (auto& ep : episodes) {
        std::vector<int> order = class_ids;
        std::shuffle(order.begin(), order.end(), rng);
        for (int ci = 0; ci < spec.n_way; ++ci) {
            const auto& pool = features.at(order[ci]);
            std::vector<int> idx(pool.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (int k = 0; k < spec.k_shot; ++k) {
                ep.support.push_back(&pool[idx[k]]);
                ep.support_label.push_back(ci);
            }
            for (int q = 0; q < spec.n_query; ++q) {
                ep.query.push_back(&pool[idx[spec.k_shot + q]]);
                ep.query_label.push_back(ci);
            }
        }
    }

    FeatureRanges ranges;
    ConductanceLut lut;
    if (backend.kind == BackendSpec::Kind::mcam) {
        if (cam.bits != backend.bits)
            throw std::invalid_argument("run_episode: backend wants " +
                                        std::to_string(backend.bits) +
                                        "-bit cells, geometry is " +
                                        std::to_string(cam.bits) + "-bit");
        std::vector<std::vector<double>> all_support;
        for (const auto& ep : episodes)
            for (const auto* v : ep.support) all_support.push_back(*v);
        ranges = compute_ranges(all_support);
        lut = build_lut(cam);
    }
    LshEncoder enc;
    if (backend.kind == BackendSpec::Kind::tcam_lsh)
        enc = make_lsh_encoder(spec.feature_dim, spec.feature_dim, seed + 1);

    int correct = 0, total = 0;
    for (const auto& ep : episodes) {
        switch (backend.kind) {
            case BackendSpec::Kind::mcam: {
                std::vector<Word> sup(ep.support.size());
                for (size_t r = 0; r < ep.support.size(); ++r)
                    sup[r] = quantize(*ep.support[r], ranges, backend.bits);
                for (size_t i = 0; i < ep.query.size(); ++i) {
                    const Word q = quantize(*ep.query[i], ranges, backend.bits);
                    int best = 0;
                    double best_g = kInf;
                    for (size_t r = 0; r < sup.size(); ++r) {
                        const double g = row_conductance(q, sup[r], lut);
                        if (g < best_g) {
                            best_g = g;
                            best = static_cast<int>(r);
                        }
                    }
                    if (ep.support_label[best] == ep.query_label[i]) ++correct;
                }
                break;
            }
            case BackendSpec::Kind::tcam_lsh: {
                std::vector<BitWord> sigs(ep.support.size());
                for (size_t r = 0; r < ep.support.size(); ++r)
                    sigs[r] = lsh_encode(*ep.support[r], enc);
                for (size_t i = 0; i < ep.query.size(); ++i) {
                    const int best = nn_search_lsh(sigs, lsh_encode(*ep.query[i], enc));
                    if (ep.support_label[best] == ep.query_label[i]) ++correct;
                }
                break;
            }
            default: {
                const Metric m = exact_metric(backend.kind);
                std::vector<std::vector<double>> sup;
                sup.reserve(ep.support.size());
                for (const auto* v : ep.support) sup.push_back(*v);
                for (size_t i = 0; i < ep.query.size(); ++i) {
                    const int best = nn_search_baseline(m, sup, *ep.query[i]);
                    if (ep.support_label[best] == ep.query_label[i]) ++correct;
                }
                break;
            }
        }
        total += static_cast<int>(ep.query.size());
    }
    return 100.0 * correct / total;
}

std::vector<SweepRow> variation_sweep(const Dataset& train, const Dataset& test, int bits,
                                      const std::vector<double>& sigmas, int trials,
                                      std::uint64_t seed) {
    return variation_sweep(train, test, default_cam(bits), sigmas, trials, seed);
}

std::vector<SweepRow> variation_sweep(const Dataset& train, const Dataset& test,
                                      const CamConfig& cam,
                                      const std::vector<double>& sigmas, int trials,
                                      std::uint64_t seed) {
    if (sigmas.empty()) throw std::invalid_argument("variation sweep: no sigma values");
    if (trials < 1) throw std::invalid_argument("variation sweep: need at least one trial");
    if (train.size() == 0 || test.size() == 0)
        throw std::invalid_argument("variation sweep: empty train or test set");
    const int bits = cam.bits;
    const FeatureRanges ranges = ranges_or_compute(train);
    std::vector<Word> rows(train.size());
    for (int r = 0; r < train.size(); ++r)
        rows[r] = quantize(train.features[r], ranges, bits);
    const CamArray array = make_array(cam, rows);
    std::vector<Word> queries(test.size());
    for (int i = 0; i < test.size(); ++i)
        queries[i] = quantize(test.features[i], ranges, bits);

    const int n = 1 << bits;
    const size_t width = array.rows.front().size();
    std::mt19937_64 rng(seed);
    std::vector<SweepRow> out;
    out.reserve(sigmas.size());
    // Per-trial cell tables: conductance of cell (r, j) for each input state,
    // so each query costs lookups instead of fresh transfer-curve evaluations.
    std::vector<double> cell(array.rows.size() * width * n);
    for (double sigma : sigmas) {
        VariationParams var;
        var.sigma = sigma;
        var.seed = seed;
        std::vector<double> accs(trials);
        for (int t = 0; t < trials; ++t) {
            const SampledThresholds sampled = sample_thresholds(array, var, rng);
            for (size_t r = 0; r < array.rows.size(); ++r) {
                for (size_t j = 0; j < width; ++j) {
                    const StoredPair& p = sampled.rows[r][j];
                    for (int i = 0; i < n; ++i) {
                        const double dl = array.cfg.dl_inputs[i];
                        const double g_right = conductance(dl, p.right, array.cfg.device);
                        const double g_left =
                            p.left == kInf
                                ? array.cfg.device.g_off
                                : conductance(analog_inverse(dl, array.cfg.center),
                                              p.left, array.cfg.device);
                        cell[(r * width + j) * n + i] = g_right + g_left;
                    }
                }
            }
            int correct = 0;
            for (int i = 0; i < test.size(); ++i) {
                const Word& q = queries[i];
                int best = 0;
                double best_g = kInf;
                for (size_t r = 0; r < array.rows.size(); ++r) {
                    double g = 0.0;
                    const double* base = cell.data() + r * width * n;
                    for (size_t j = 0; j < width; ++j) g += base[j * n + q[j]];
                    if (g < best_g) {
                        best_g = g;
                        best = static_cast<int>(r);
                    }
                }
                if (train.labels[best] == test.labels[i]) ++correct;
            }
            accs[t] = 100.0 * correct / test.size();
        }
        SweepRow row;
        row.sigma = sigma;
        row.mean_acc = mean(accs);
        row.std_acc = stddev(accs);
        out.push_back(row);
    }
    return out;
}

void write_report_csv(const RunReport& report, std::ostream& out) {
    out << "# config_hash=" << report.config_hash << " seed=" << report.seed << "\n";
    out << "workload,backend,accuracy_pct\n";
    char buf[32];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%.2f", row.accuracy);
        out << row.workload << "," << row.backend << "," << buf << "\n";
    }
}

void print_report(const RunReport& report, std::ostream& out) {
    size_t w_workload = 8, w_backend = 7;
    for (const auto& row : report.rows) {
        w_workload = std::max(w_workload, row.workload.size());
        w_backend = std::max(w_backend, row.backend.size());
    }
    out << "config_hash=" << report.config_hash << " seed=" << report.seed << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %12s", static_cast<int>(w_workload),
                  "workload", static_cast<int>(w_backend), "backend", "accuracy");
    out << buf << "\n";
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %-*s  %11.2f%%", static_cast<int>(w_workload),
                      row.workload.c_str(), static_cast<int>(w_backend),
                      row.backend.c_str(), row.accuracy);
        out << buf << "\n";
    }
}

}  // namespace mcamsim
