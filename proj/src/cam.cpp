#include "mcamsim/cam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mcamsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_cell(const std::string& token, int row, int col) {
    try {
        size_t pos = 0;
        double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("lut csv: bad number '" + token + "' at row " +
                                 std::to_string(row) + ", column " + std::to_string(col));
    }
}

}  // namespace

CamConfig default_cam(int bits) {
    CamConfig cfg;
    cfg.bits = bits;
    cfg.device = default_device(bits);
    const auto& v = cfg.device.vth_levels;
    const double spacing = v[1] - v[0];
    cfg.dl_inputs.resize(v.size());
    for (size_t k = 0; k < v.size(); ++k) cfg.dl_inputs[k] = v[k] - spacing / 2.0;
    cfg.center = (v.front() + v.back()) / 2.0 + spacing / 4.0;
    return cfg;
}

void validate(const CamConfig& cfg) {
    validate(cfg.device);
    const int n = 1 << cfg.bits;
    if (cfg.bits < 1)
        throw std::invalid_argument("cam bits must be >= 1");
    if (n != cfg.device.num_levels)
        throw std::invalid_argument("2^bits (" + std::to_string(n) +
                                    ") must equal device num_levels (" +
                                    std::to_string(cfg.device.num_levels) + ")");
    if (static_cast<int>(cfg.dl_inputs.size()) != n)
        throw std::invalid_argument("need one dl input per state");
    const auto& v = cfg.device.vth_levels;
    for (int k = 0; k < n; ++k) {
        if (k > 0 && !(cfg.dl_inputs[k] > cfg.dl_inputs[k - 1]))
            throw std::invalid_argument("dl_inputs must be strictly increasing");
        const double below = k > 0 ? v[k - 1] : -kInf;
        if (!(cfg.dl_inputs[k] > below && cfg.dl_inputs[k] < v[k]))
            throw std::invalid_argument(
                "dl input " + std::to_string(k) +
                " must lie strictly between the adjacent thresholds");
    }
    if (!std::isfinite(cfg.center))
        throw std::invalid_argument("inversion center must be finite");
}

StoredPair encode_state(int state, const CamConfig& cfg) {
    const int n = 1 << cfg.bits;
    if (state < 0 || state >= n)
        throw std::out_of_range("state " + std::to_string(state) + " outside [0, " +
                                std::to_string(n) + ")");
    StoredPair p;
    p.right = cfg.device.vth_levels[state];
    p.left = state == 0
                 ? kInf
                 : analog_inverse(cfg.device.vth_levels[state - 1], cfg.center);
    return p;
}

std::pair<double, double> branch_conductances(int input_state, int stored_state,
                                              const CamConfig& cfg) {
    const int n = 1 << cfg.bits;
    if (input_state < 0 || input_state >= n)
        throw std::out_of_range("input state " + std::to_string(input_state) +
                                " outside [0, " + std::to_string(n) + ")");
    const StoredPair stored = encode_state(stored_state, cfg);
    const double dl = cfg.dl_inputs[input_state];
    const double g_right = conductance(dl, stored.right, cfg.device);
    const double g_left =
        stored.left == kInf
            ? cfg.device.g_off
            : conductance(analog_inverse(dl, cfg.center), stored.left, cfg.device);
    return {g_right, g_left};
}

double cell_conductance(int input_state, int stored_state, const CamConfig& cfg) {
    auto [g_right, g_left] = branch_conductances(input_state, stored_state, cfg);
    return g_right + g_left;
}

ConductanceLut build_lut(const CamConfig& cfg) {
    validate(cfg);
    const int n = 1 << cfg.bits;
    ConductanceLut lut;
    lut.bits = cfg.bits;
    lut.table.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) lut.table[i][s] = cell_conductance(i, s, cfg);
    return lut;
}

ConductanceLut build_lut(const CamConfig& cfg, const VariationParams& var,
                         std::mt19937_64& rng) {
    validate(cfg);
    const int n = 1 << cfg.bits;
    ConductanceLut lut;
    lut.bits = cfg.bits;
    lut.provenance = LutProvenance::sampled;
    lut.sigma = var.sigma;
    lut.seed = var.seed;
    lut.table.assign(n, std::vector<double>(n, 0.0));
    std::normal_distribution<double> gauss(0.0, var.sigma > 0.0 ? var.sigma : 1.0);
    auto draw = [&]() {
        if (var.sigma <= 0.0) return 0.0;
        double dv = gauss(rng);
        if (var.truncation > 0.0) {
            const double bound = var.truncation * var.sigma;
            dv = std::clamp(dv, -bound, bound);
        }
        return dv;
    };
    for (int s = 0; s < n; ++s) {
        StoredPair p = encode_state(s, cfg);
        p.right += draw();
        if (p.left != kInf) p.left += draw();
        for (int i = 0; i < n; ++i) {
            const double dl = cfg.dl_inputs[i];
            const double g_right = conductance(dl, p.right, cfg.device);
            const double g_left =
                p.left == kInf
                    ? cfg.device.g_off
                    : conductance(analog_inverse(dl, cfg.center), p.left, cfg.device);
            lut.table[i][s] = g_right + g_left;
        }
    }
    return lut;
}

std::vector<double> lut_distance_curve(const ConductanceLut& lut, int stored_state) {
    const int n = 1 << lut.bits;
    if (stored_state < 0 || stored_state >= n)
        throw std::out_of_range("stored state outside table");
    const int d_max = std::max(stored_state, n - 1 - stored_state);
    std::vector<double> curve(d_max + 1, 0.0);
    for (int d = 0; d <= d_max; ++d) {
        const int lo = stored_state - d;
        const int hi = stored_state + d;
        double sum = 0.0;
        int sides = 0;
        if (lo >= 0) { sum += lut.table[lo][stored_state]; ++sides; }
        if (hi < n && d > 0) { sum += lut.table[hi][stored_state]; ++sides; }
        curve[d] = sum / sides;
    }
    return curve;
}

std::vector<double> lut_derivative_profile(const ConductanceLut& lut, int stored_state) {
    const auto curve = lut_distance_curve(lut, stored_state);
    std::vector<double> diff(curve.size() - 1);
    for (size_t d = 1; d < curve.size(); ++d) diff[d - 1] = curve[d] - curve[d - 1];
    return diff;
}

int log_linear_max_distance(const CamConfig& cfg) {
    const int n = 1 << cfg.bits;
    int d_max = 0;
    for (int d = 1; d < n; ++d) {
        const double overdrive = cfg.dl_inputs[d] - cfg.device.vth_levels[0];
        if (overdrive > 0.0 && overdrive <= cfg.device.knee_overdrive) d_max = d;
    }
    return d_max;
}

void write_lut_csv(const ConductanceLut& lut, std::ostream& out,
                   const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "# provenance="
        << (lut.provenance == LutProvenance::nominal ? "nominal" : "sampled");
    if (lut.provenance == LutProvenance::sampled)
        out << " sigma=" << lut.sigma << " seed=" << lut.seed;
    out << "\n";
    const int n = 1 << lut.bits;
    out << "input_state";
    for (int s = 0; s < n; ++s) out << "," << s;
    out << "\n";
    char buf[32];
    for (int i = 0; i < n; ++i) {
        out << i;
        for (int s = 0; s < n; ++s) {
            std::snprintf(buf, sizeof buf, "%.6g", lut.table[i][s]);
            out << "," << buf;
        }
        out << "\n";
    }
}

ConductanceLut read_lut_csv(std::istream& in) {
    ConductanceLut lut;
    std::string line;
    bool header_seen = false;
    int n = 0;
    int row = 0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                if (tok == "provenance=sampled") lut.provenance = LutProvenance::sampled;
                else if (tok.rfind("sigma=", 0) == 0) lut.sigma = std::stod(tok.substr(6));
                else if (tok.rfind("seed=", 0) == 0) lut.seed = std::stoull(tok.substr(5));
            }
            continue;
        }
        std::vector<std::string> tokens;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) tokens.push_back(tok);
        if (!header_seen) {
            header_seen = true;
            n = static_cast<int>(tokens.size()) - 1;
            if (n < 2 || (n & (n - 1)) != 0)
                throw std::runtime_error("lut csv: state count must be a power of two, got " +
                                         std::to_string(n));
            lut.bits = 0;
            while ((1 << lut.bits) < n) ++lut.bits;
            lut.table.assign(n, std::vector<double>(n, 0.0));
            continue;
        }
        if (row >= n) throw std::runtime_error("lut csv: more rows than states");
        if (static_cast<int>(tokens.size()) != n + 1)
            throw std::runtime_error("lut csv: row " + std::to_string(row) + " has " +
                                     std::to_string(tokens.size() - 1) + " cells, want " +
                                     std::to_string(n));
        for (int s = 0; s < n; ++s)
            lut.table[row][s] = parse_cell(tokens[s + 1], line_no, s + 1);
        ++row;
    }
    if (!header_seen || row != n)
        throw std::runtime_error("lut csv: expected " + std::to_string(n) +
                                 " data rows, got " + std::to_string(row));
    return lut;
}

std::string lut_to_json(const ConductanceLut& lut) {
    nlohmann::json j;
    j["bits"] = lut.bits;
    j["provenance"] = lut.provenance == LutProvenance::nominal ? "nominal" : "sampled";
    if (lut.provenance == LutProvenance::sampled) {
        j["sigma"] = lut.sigma;
        j["seed"] = lut.seed;
    }
    j["table"] = lut.table;
    return j.dump(2);
}

ConductanceLut lut_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ConductanceLut lut;
    lut.bits = j.at("bits").get<int>();
    lut.provenance = j.at("provenance").get<std::string>() == "sampled"
                         ? LutProvenance::sampled
                         : LutProvenance::nominal;
    lut.sigma = j.value("sigma", 0.0);
    lut.seed = j.value("seed", std::uint64_t{0});
    lut.table = j.at("table").get<std::vector<std::vector<double>>>();
    const size_t n = size_t{1} << lut.bits;
    if (lut.table.size() != n)
        throw std::runtime_error("lut json: table height does not match bits");
    for (const auto& r : lut.table)
        if (r.size() != n) throw std::runtime_error("lut json: table is not square");
    return lut;
}

}  // namespace mcamsim
