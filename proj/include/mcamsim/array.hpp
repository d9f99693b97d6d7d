#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "mcamsim/cam.hpp"

namespace mcamsim {

using Word = std::vector<int>;  // state indices, one per cell

/// Match-line RC discharge parameters.
struct TimingParams {
    double c_ml = 10.0;        // fF
    double v_precharge = 0.8;  // V
    double v_sense = 0.4;      // V
};

/// An MCAM array: stored words of fixed length plus the cell geometry and
/// its nominal conductance table.
struct CamArray {
    CamConfig cfg;
    ConductanceLut lut;
    std::vector<Word> rows;
    TimingParams timing;
};

/// Builds the nominal LUT and validates rows and timing.
CamArray make_array(const CamConfig& cfg, std::vector<Word> rows,
                    TimingParams timing = {});

struct SearchResult {
    int winner = -1;                       // lowest-index argmin conductance
    std::vector<double> row_conductances;  // uS
    std::vector<double> discharge_times;   // ns
};

/// Total match-line conductance of one row for a query word.
double row_conductance(const Word& query, const Word& row, const ConductanceLut& lut);

/// RC discharge time in ns: t = (c_ml / g_total) * ln(v_precharge/v_sense).
/// Reported for analysis; winner selection uses conductances directly.
double discharge_time(double g_total_us, const TimingParams& t);

/// Nearest row by total conductance. Ties go to the lowest row index.
SearchResult search(const CamArray& array, const Word& query);

/// One Monte Carlo instance of every stored cell's threshold pair.
struct SampledThresholds {
    std::vector<std::vector<StoredPair>> rows;
};

SampledThresholds sample_thresholds(const CamArray& array,
                                    const VariationParams& var,
                                    std::mt19937_64& rng);

/// Search against a sampled threshold instance instead of the nominal LUT.
SearchResult search(const CamArray& array, const SampledThresholds& sampled,
                    const Word& query);

/// Repeated searches, one fresh threshold sample per trial.
std::vector<SearchResult> search_with_variation(const CamArray& array,
                                                const Word& query,
                                                const VariationParams& var,
                                                int trials,
                                                std::mt19937_64& rng);

/// Rows of state indices, one word per line.
std::vector<Word> read_words_csv(std::istream& in, int bits);
void write_search_csv(const SearchResult& r, std::ostream& out,
                      const std::vector<std::string>& comments = {});

}  // namespace mcamsim
