#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mcamsim/device.hpp"

namespace mcamsim {

/// Geometry of a multi-bit CAM cell family: the threshold ladder, the data
/// line voltage that encodes each input state, and the analog-inversion
/// center used to drive the complementary data line.
///
/// State s occupies the threshold interval (vth[s-1], vth[s]]; its input
/// voltage sits at the interval midpoint (half a spacing below vth[0] for
/// the lowest state, whose lower bound is open).
struct CamConfig {
    int bits = 3;
    DeviceParams device;
    std::vector<double> dl_inputs;  // mV, one per state, strictly increasing
    double center = 0.0;            // mV, analog-inversion center
};

/// Defaults for a given width: default_device ladder, midpoint inputs,
/// center = ladder midpoint + spacing/4. The center value cancels out of
/// every conductance (both the inverted gate and the inverted threshold
/// are reflected about it), so it only shows up in reported thresholds.
CamConfig default_cam(int bits);

void validate(const CamConfig& cfg);

/// Reflection about the inversion center: v_bar = 2*center - v.
[[nodiscard]] constexpr double analog_inverse(double v, double center) {
    return 2.0 * center - v;
}

/// Thresholds programmed into the two transistors of a cell storing a
/// state. `right` guards the upper bound of the state's interval and sees
/// the data line; `left` guards the lower bound, stores its analog inverse
/// and sees the inverted data line. The lowest state has no lower bound,
/// so its left threshold is +infinity (that branch never conducts).
struct StoredPair {
    double left;   // mV, +inf for state 0
    double right;  // mV
};

StoredPair encode_state(int state, const CamConfig& cfg);

/// Match-line conductance contributed by one cell: DL branch plus
/// inverted-DL branch. Equal input and stored state leaves both branches
/// subthreshold (2*g_off); each step of mismatch adds one level spacing of
/// overdrive to exactly one branch.
double cell_conductance(int input_state, int stored_state, const CamConfig& cfg);

/// Both branch conductances separately (DL branch, inverted-DL branch).
std::pair<double, double> branch_conductances(int input_state, int stored_state,
                                              const CamConfig& cfg);

enum class LutProvenance { nominal, sampled };

/// Dense 2^B x 2^B map of cell conductance, table[input_state][stored_state],
/// in uS. Sampled tables record the variation draw they were built from.
struct ConductanceLut {
    int bits = 0;
    std::vector<std::vector<double>> table;
    LutProvenance provenance = LutProvenance::nominal;
    double sigma = 0.0;       // mV, sampled tables only
    std::uint64_t seed = 0;   // sampled tables only
};

ConductanceLut build_lut(const CamConfig& cfg);

/// Variation-aware build: one threshold pair draw per stored state.
ConductanceLut build_lut(const CamConfig& cfg, const VariationParams& var,
                         std::mt19937_64& rng);

/// Conductance vs input distance for one stored state. Entry d is the cell
/// conductance at |input - stored| = d, averaging the two sides where both
/// exist (they coincide for nominal tables).
std::vector<double> lut_distance_curve(const ConductanceLut& lut, int stored_state);

/// Finite differences of the distance curve: entry k = G(k+1) - G(k).
std::vector<double> lut_derivative_profile(const ConductanceLut& lut, int stored_state);

/// Largest distance whose active branch is still in the log-linear region
/// under this geometry (the segment a log-affine fit applies to).
int log_linear_max_distance(const CamConfig& cfg);

// CSV layout: optional '#' comment lines, then a header of stored states,
// then one row per input state. Values carry 6 significant digits.
void write_lut_csv(const ConductanceLut& lut, std::ostream& out,
                   const std::vector<std::string>& comments = {});
ConductanceLut read_lut_csv(std::istream& in);

std::string lut_to_json(const ConductanceLut& lut);
ConductanceLut lut_from_json(const std::string& text);

}  // namespace mcamsim
