#include "mcamsim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mcamsim {

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& tok, int row, const std::string& col) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("csv: bad value '" + tok + "' in column '" + col +
                                 "' on data row " + std::to_string(row));
    }
}

int parse_label(const std::string& tok, int row, const std::string& col) {
    try {
        size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("csv: bad label '" + tok + "' in column '" + col +
                                 "' on data row " + std::to_string(row));
    }
}

std::string basename_no_ext(const std::string& path) {
    const size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("dataset file is empty: " + path);
    strip_cr(line);
    const auto header = split_line(line);
    int label_idx = -1;
    Dataset ds;
    ds.name = basename_no_ext(path);
    for (size_t c = 0; c < header.size(); ++c) {
        if (header[c] == label_column) {
            if (label_idx >= 0)
                throw std::runtime_error("csv: duplicate label column '" + label_column +
                                         "' in " + path);
            label_idx = static_cast<int>(c);
        } else {
            ds.feature_names.push_back(header[c]);
        }
    }
    if (label_idx < 0)
        throw std::runtime_error("csv: no column named '" + label_column + "' in " + path);
    int row = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        ++row;
        const auto cells = split_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("csv: data row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(header.size()));
        std::vector<double> x;
        x.reserve(ds.feature_names.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            if (static_cast<int>(c) == label_idx)
                ds.labels.push_back(parse_label(cells[c], row, header[c]));
            else
                x.push_back(parse_double(cells[c], row, header[c]));
        }
        ds.features.push_back(std::move(x));
    }
    if (ds.features.empty())
        throw std::runtime_error("csv: no data rows in " + path);
    return ds;
}

FeatureRanges compute_ranges(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("compute_ranges: no rows");
    const size_t dim = rows.front().size();
    FeatureRanges r;
    r.lo.assign(dim, std::numeric_limits<double>::infinity());
    r.hi.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& x : rows) {
        if (x.size() != dim)
            throw std::invalid_argument("compute_ranges: ragged rows");
        for (size_t j = 0; j < dim; ++j) {
            r.lo[j] = std::min(r.lo[j], x[j]);
            r.hi[j] = std::max(r.hi[j], x[j]);
        }
    }
    return r;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac,
                                  std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    std::vector<int> idx(ds.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    const int n_train = static_cast<int>(std::floor(train_frac * ds.size()));
    if (n_train < 1 || n_train >= ds.size())
        throw std::invalid_argument("split leaves an empty half");
    Dataset train, test;
    train.name = ds.name;
    test.name = ds.name;
    train.feature_names = ds.feature_names;
    test.feature_names = ds.feature_names;
    for (int i = 0; i < ds.size(); ++i) {
        Dataset& half = i < n_train ? train : test;
        half.features.push_back(ds.features[idx[i]]);
        half.labels.push_back(ds.labels[idx[i]]);
    }
    train.ranges = compute_ranges(train.features);
    test.ranges = train.ranges;
    return {std::move(train), std::move(test)};
}

std::vector<int> quantize(std::span<const double> x, const FeatureRanges& ranges,
                          int bits) {
    if (x.size() != ranges.lo.size())
        throw std::invalid_argument("quantize: " + std::to_string(x.size()) +
                                    " features but " + std::to_string(ranges.lo.size()) +
                                    " ranges");
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("quantize: bits out of range");
    const int n = 1 << bits;
    std::vector<int> out(x.size());
    for (size_t j = 0; j < x.size(); ++j) {
        const double lo = ranges.lo[j];
        const double span = ranges.hi[j] > lo ? ranges.hi[j] - lo : 1.0;
        int q = static_cast<int>(std::floor((x[j] - lo) / span * n));
        out[j] = std::clamp(q, 0, n - 1);
    }
    return out;
}

}  // namespace mcamsim
