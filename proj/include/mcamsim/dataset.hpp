#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcamsim {

/// Per-feature quantization bounds, taken from training data only.
struct FeatureRanges {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct Dataset {
    std::string name;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> features;  // row-major, one row per sample
    std::vector<int> labels;
    FeatureRanges ranges;  // filled by split(), empty on a freshly loaded set

    int n_features() const { return feature_names.empty() ? 0 : static_cast<int>(feature_names.size()); }
    int size() const { return static_cast<int>(features.size()); }
};

/// Loads a numeric CSV with a header row. The label column (default name
/// "label") holds integer class ids; every other column is a feature.
/// Parse problems raise std::runtime_error naming the row and column.
Dataset load_csv(const std::string& path, const std::string& label_column = "label");

/// Seeded shuffle split. Both halves carry ranges computed from the train
/// half, so downstream quantization cannot leak test statistics.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac,
                                  std::uint64_t seed);

FeatureRanges compute_ranges(const std::vector<std::vector<double>>& rows);

/// Uniform per-feature quantization of [lo, hi] into 2^bits bins; values
/// outside the range clamp to the end bins.
std::vector<int> quantize(std::span<const double> x, const FeatureRanges& ranges,
                          int bits);

}  // namespace mcamsim
