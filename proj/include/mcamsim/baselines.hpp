#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mcamsim {

enum class Metric { cosine, euclidean, linf, hamming };

/// Lower is nearer for every metric. Cosine distance is 1 - cos similarity
/// and rejects zero vectors. hamming here counts element-wise inequality;
/// packed signatures use hamming_distance below.
double distance(Metric m, std::span<const double> a, std::span<const double> b);

/// Packed bit signature.
struct BitWord {
    std::vector<std::uint64_t> words;
    int n_bits = 0;
};

BitWord make_bitword(std::span<const bool> bits);
int hamming_distance(const BitWord& a, const BitWord& b);

/// Random-hyperplane signature encoder: bit j is the sign of the dot
/// product with a standard-normal hyperplane. Signatures are scale
/// invariant and approximate angular distance: E[hamming/n_bits] = theta/pi.
struct LshEncoder {
    std::vector<double> hyperplanes;  // n_bits x n_features, row-major
    int n_bits = 0;
    int n_features = 0;
    std::uint64_t seed = 0;
};

LshEncoder make_lsh_encoder(int n_bits, int n_features, std::uint64_t seed);
BitWord lsh_encode(std::span<const double> x, const LshEncoder& enc);

/// Exact-metric linear scan. Ties go to the lowest index.
int nn_search_baseline(Metric m, const std::vector<std::vector<double>>& memory,
                       std::span<const double> query);

/// Hamming linear scan over precomputed signatures.
int nn_search_lsh(const std::vector<BitWord>& signatures, const BitWord& query);

}  // namespace mcamsim
