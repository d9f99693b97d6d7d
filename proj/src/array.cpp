#include "mcamsim/array.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mcamsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_word(const Word& w, size_t expected_len, int n_states, const char* what,
                size_t index) {
    if (w.size() != expected_len)
        throw std::invalid_argument(std::string(what) + " " + std::to_string(index) +
                                    " has " + std::to_string(w.size()) +
                                    " cells, want " + std::to_string(expected_len));
    for (int s : w)
        if (s < 0 || s >= n_states)
            throw std::invalid_argument(std::string(what) + " " + std::to_string(index) +
                                        " holds state " + std::to_string(s) +
                                        " outside [0, " + std::to_string(n_states) + ")");
}

}  // namespace

CamArray make_array(const CamConfig& cfg, std::vector<Word> rows, TimingParams timing) {
    validate(cfg);
    if (rows.empty()) throw std::invalid_argument("array needs at least one row");
    const int n = 1 << cfg.bits;
    const size_t len = rows.front().size();
    if (len == 0) throw std::invalid_argument("words must hold at least one cell");
    for (size_t r = 0; r < rows.size(); ++r) check_word(rows[r], len, n, "row", r);
    if (!(timing.c_ml > 0.0))
        throw std::invalid_argument("match-line capacitance must be positive");
    if (!(timing.v_precharge > timing.v_sense && timing.v_sense > 0.0))
        throw std::invalid_argument("need v_precharge > v_sense > 0");
    CamArray a;
    a.cfg = cfg;
    a.lut = build_lut(cfg);
    a.rows = std::move(rows);
    a.timing = timing;
    return a;
}

double row_conductance(const Word& query, const Word& row, const ConductanceLut& lut) {
    if (query.size() != row.size())
        throw std::invalid_argument("query/row length mismatch");
    double g = 0.0;
    for (size_t j = 0; j < query.size(); ++j) g += lut.table[query[j]][row[j]];
    return g;
}

double discharge_time(double g_total_us, const TimingParams& t) {
    // fF / uS = ns, so the unit juggling is free.
    return (t.c_ml / g_total_us) * std::log(t.v_precharge / t.v_sense);
}

namespace {

SearchResult finish_search(std::vector<double> conductances, const TimingParams& t) {
    SearchResult r;
    r.row_conductances = std::move(conductances);
    r.discharge_times.resize(r.row_conductances.size());
    double best = kInf;
    for (size_t i = 0; i < r.row_conductances.size(); ++i) {
        r.discharge_times[i] = discharge_time(r.row_conductances[i], t);
        if (r.row_conductances[i] < best) {
            best = r.row_conductances[i];
            r.winner = static_cast<int>(i);
        }
    }
    return r;
}

}  // namespace

SearchResult search(const CamArray& array, const Word& query) {
    const int n = 1 << array.cfg.bits;
    check_word(query, array.rows.front().size(), n, "query", 0);
    std::vector<double> g(array.rows.size());
    for (size_t r = 0; r < array.rows.size(); ++r)
        g[r] = row_conductance(query, array.rows[r], array.lut);
    return finish_search(std::move(g), array.timing);
}

SampledThresholds sample_thresholds(const CamArray& array, const VariationParams& var,
                                    std::mt19937_64& rng) {
    SampledThresholds s;
    s.rows.resize(array.rows.size());
    std::normal_distribution<double> gauss(0.0, var.sigma > 0.0 ? var.sigma : 1.0);
    auto draw = [&]() {
        if (var.sigma <= 0.0) return 0.0;
        double dv = gauss(rng);
        if (var.truncation > 0.0) {
            const double bound = var.truncation * var.sigma;
            if (dv > bound) dv = bound;
            if (dv < -bound) dv = -bound;
        }
        return dv;
    };
    for (size_t r = 0; r < array.rows.size(); ++r) {
        s.rows[r].resize(array.rows[r].size());
        for (size_t j = 0; j < array.rows[r].size(); ++j) {
            StoredPair p = encode_state(array.rows[r][j], array.cfg);
            p.right += draw();
            if (p.left != kInf) p.left += draw();
            s.rows[r][j] = p;
        }
    }
    return s;
}

SearchResult search(const CamArray& array, const SampledThresholds& sampled,
                    const Word& query) {
    const int n = 1 << array.cfg.bits;
    check_word(query, array.rows.front().size(), n, "query", 0);
    if (sampled.rows.size() != array.rows.size())
        throw std::invalid_argument("sampled thresholds do not match array shape");
    std::vector<double> g(array.rows.size(), 0.0);
    for (size_t r = 0; r < array.rows.size(); ++r) {
        for (size_t j = 0; j < query.size(); ++j) {
            const StoredPair& p = sampled.rows[r][j];
            const double dl = array.cfg.dl_inputs[query[j]];
            const double g_right = conductance(dl, p.right, array.cfg.device);
            const double g_left =
                p.left == kInf
                    ? array.cfg.device.g_off
                    : conductance(analog_inverse(dl, array.cfg.center), p.left,
                                  array.cfg.device);
            g[r] += g_right + g_left;
        }
    }
    return finish_search(std::move(g), array.timing);
}

std::vector<SearchResult> search_with_variation(const CamArray& array, const Word& query,
                                                const VariationParams& var, int trials,
                                                std::mt19937_64& rng) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::vector<SearchResult> out;
    out.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        const SampledThresholds s = sample_thresholds(array, var, rng);
        out.push_back(search(array, s, query));
    }
    return out;
}

std::vector<Word> read_words_csv(std::istream& in, int bits) {
    const int n = 1 << bits;
    std::vector<Word> words;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        Word w;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            int v = 0;
            try {
                size_t pos = 0;
                v = std::stoi(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw std::runtime_error("words csv: bad state '" + tok + "' on line " +
                                         std::to_string(line_no));
            }
            if (v < 0 || v >= n)
                throw std::runtime_error("words csv: state " + std::to_string(v) +
                                         " on line " + std::to_string(line_no) +
                                         " outside [0, " + std::to_string(n) + ")");
            w.push_back(v);
        }
        if (!w.empty()) words.push_back(std::move(w));
    }
    return words;
}

void write_search_csv(const SearchResult& r, std::ostream& out,
                      const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "row,conductance_us,discharge_ns,winner\n";
    char buf[64];
    for (size_t i = 0; i < r.row_conductances.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6g,%d", i, r.row_conductances[i],
                      r.discharge_times[i], static_cast<int>(i) == r.winner ? 1 : 0);
        out << buf << "\n";
    }
}

}  // namespace mcamsim
