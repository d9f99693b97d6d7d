#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mcamsim/array.hpp"
#include "mcamsim/baselines.hpp"
#include "mcamsim/dataset.hpp"

namespace mcamsim {

/// A distance backend for classification: an MCAM of some width, the
/// TCAM+LSH pipeline, or an exact vector metric.
struct BackendSpec {
    enum class Kind { mcam, tcam_lsh, cosine, euclidean, linf };
    Kind kind = Kind::mcam;
    int bits = 3;  // mcam only
};

/// Parses "mcam3", "mcam2", "tcam_lsh", "cosine", "euclidean", "linf".
/// Unknown names raise std::invalid_argument listing the valid set.
BackendSpec parse_backend(const std::string& name);
std::string backend_name(const BackendSpec& b);

/// 1-NN classification accuracy in percent. The seed feeds the LSH encoder
/// (one fixed encoder per run); exact backends and mcam ignore it.
/// tcam_lsh signatures are as long as the CAM word: one bit per feature.
double nn_classify(const Dataset& train, const Dataset& test,
                   const BackendSpec& backend, std::uint64_t lsh_seed);

/// Same, against an explicit cell geometry (mcam backends only consult it;
/// its width must match the backend's bits).
double nn_classify(const Dataset& train, const Dataset& test,
                   const BackendSpec& backend, std::uint64_t lsh_seed,
                   const CamConfig& cam);

/// N-way K-shot episode protocol over per-class feature pools.
struct EpisodeSpec {
    int n_way = 5;
    int k_shot = 1;
    int n_query = 15;   // queries per class per episode
    int episodes = 20;
    int feature_dim = 64;
};

using ClassFeatures = std::map<int, std::vector<std::vector<double>>>;

/// Gaussian class clusters: means ~ N(0, I), samples = mean + spread*N(0, I).
ClassFeatures synthetic_pool(int classes, int per_class, int dim, double spread,
                             std::uint64_t seed);

/// CSV with a class-id column followed by feature columns.
ClassFeatures load_class_features(const std::string& path, int feature_dim);

/// Episode accuracy in percent. Every support vector is stored as its own
/// row (winner-take-all across shots). For the mcam backend, quantization
/// ranges come from the union of support vectors drawn this run.
/// tcam_lsh signatures are feature_dim bits wide.
double run_episode(const ClassFeatures& features, const EpisodeSpec& spec,
                   const BackendSpec& backend, std::uint64_t seed);
double run_episode(const ClassFeatures& features, const EpisodeSpec& spec,
                   const BackendSpec& backend, std::uint64_t seed,
                   const CamConfig& cam);

struct SweepRow {
    double sigma = 0.0;     // mV
    double mean_acc = 0.0;  // percent
    double std_acc = 0.0;   // percent, across trials
};

/// Classification accuracy under threshold variation, one array resample
/// per trial shared by all test queries. sigma = 0 rows reproduce the
/// nominal accuracy exactly.
std::vector<SweepRow> variation_sweep(const Dataset& train, const Dataset& test,
                                      int bits, const std::vector<double>& sigmas,
                                      int trials, std::uint64_t seed);
std::vector<SweepRow> variation_sweep(const Dataset& train, const Dataset& test,
                                      const CamConfig& cam,
                                      const std::vector<double>& sigmas,
                                      int trials, std::uint64_t seed);

struct ReportRow {
    std::string workload;  // dataset or episode description
    std::string backend;
    double accuracy = 0.0;  // percent
};

struct RunReport {
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
    std::string config_hash;  // 16 hex digits
};

void write_report_csv(const RunReport& report, std::ostream& out);
void print_report(const RunReport& report, std::ostream& out);

}  // namespace mcamsim
