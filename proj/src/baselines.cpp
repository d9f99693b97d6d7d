#include "mcamsim/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mcamsim {

double distance(Metric m, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: vectors have lengths " +
                                    std::to_string(a.size()) + " and " +
                                    std::to_string(b.size()));
    if (a.empty()) throw std::invalid_argument("distance: empty vectors");
    switch (m) {
        case Metric::cosine: {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            if (na == 0.0 || nb == 0.0)
                throw std::invalid_argument("cosine distance is undefined for a zero vector");
            return 1.0 - dot / std::sqrt(na * nb);
        }
        case Metric::euclidean: {
            double ss = 0.0;
            for (size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                ss += d * d;
            }
            return std::sqrt(ss);
        }
        case Metric::linf: {
            double worst = 0.0;
            for (size_t i = 0; i < a.size(); ++i)
                worst = std::max(worst, std::fabs(a[i] - b[i]));
            return worst;
        }
        case Metric::hamming: {
            int diff = 0;
            for (size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) ++diff;
            return static_cast<double>(diff);
        }
    }
    throw std::logic_error("unreachable metric");
}

BitWord make_bitword(std::span<const bool> bits) {
    BitWord w;
    w.n_bits = static_cast<int>(bits.size());
    w.words.assign((bits.size() + 63) / 64, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) w.words[i / 64] |= std::uint64_t{1} << (i % 64);
    return w;
}

int hamming_distance(const BitWord& a, const BitWord& b) {
    if (a.n_bits != b.n_bits)
        throw std::invalid_argument("hamming_distance: signature widths differ");
    int d = 0;
    for (size_t i = 0; i < a.words.size(); ++i)
        d += std::popcount(a.words[i] ^ b.words[i]);
    return d;
}

LshEncoder make_lsh_encoder(int n_bits, int n_features, std::uint64_t seed) {
    if (n_bits < 1 || n_features < 1)
        throw std::invalid_argument("lsh encoder needs positive bit and feature counts");
    LshEncoder enc;
    enc.n_bits = n_bits;
    enc.n_features = n_features;
    enc.seed = seed;
    enc.hyperplanes.resize(static_cast<size_t>(n_bits) * n_features);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& h : enc.hyperplanes) h = gauss(rng);
    return enc;
}

BitWord lsh_encode(std::span<const double> x, const LshEncoder& enc) {
    if (static_cast<int>(x.size()) != enc.n_features)
        throw std::invalid_argument("lsh_encode: expected " +
                                    std::to_string(enc.n_features) + " features, got " +
                                    std::to_string(x.size()));
    BitWord w;
    w.n_bits = enc.n_bits;
    w.words.assign((enc.n_bits + 63) / 64, 0);
    for (int j = 0; j < enc.n_bits; ++j) {
        const double* h = enc.hyperplanes.data() + static_cast<size_t>(j) * enc.n_features;
        double dot = 0.0;
        for (int k = 0; k < enc.n_features; ++k) dot += h[k] * x[k];
        if (dot >= 0.0) w.words[j / 64] |= std::uint64_t{1} << (j % 64);
    }
    return w;
}

int nn_search_baseline(Metric m, const std::vector<std::vector<double>>& memory,
                       std::span<const double> query) {
    if (memory.empty()) throw std::invalid_argument("nn search over empty memory");
    int best = 0;
    double best_d = distance(m, memory[0], query);
    for (size_t i = 1; i < memory.size(); ++i) {
        const double d = distance(m, memory[i], query);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int nn_search_lsh(const std::vector<BitWord>& signatures, const BitWord& query) {
    if (signatures.empty()) throw std::invalid_argument("nn search over empty memory");
    int best = 0;
    int best_d = hamming_distance(signatures[0], query);
    for (size_t i = 1; i < signatures.size(); ++i) {
        const int d = hamming_distance(signatures[i], query);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace mcamsim
