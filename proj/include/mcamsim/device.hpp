#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mcamsim {

/// FeFET-like transistor abstraction: a ladder of programmable threshold
/// voltages plus a gate-voltage to channel-conductance transfer curve.
///
/// The transfer curve has three regions of overdrive x = v_gate - vth:
///   x <= knee_overdrive   g = g_off * 10^(x / subthreshold_slope), floored
///                         at g_off (exact log-linear subthreshold region)
///   x <  overdrive_sat    quadratic approach to g_on with zero slope at
///                         the saturation point (channel turn-on rolloff)
///   x >= overdrive_sat    g = g_on
/// The curve is continuous and monotone in x.
struct DeviceParams {
    int num_levels = 8;                // one Vth level per storable state
    std::vector<double> vth_levels;    // mV, strictly increasing
    double subthreshold_slope = 90.0;  // mV per decade
    double g_on = 100.0;               // uS, fully-on channel
    double g_off = 1e-3;               // uS, leakage floor
    double knee_overdrive = 280.0;     // mV, end of the log-linear region
    double overdrive_sat = 520.0;      // mV, conductance reaches g_on
};

/// Gaussian device-to-device threshold spread. Draws are independent per
/// device and per programmed state.
struct VariationParams {
    double sigma = 0.0;       // mV
    double truncation = 0.0;  // clip draws at +/- truncation*sigma; 0 = off
    std::uint64_t seed = 0;
};

/// Default ladder for a 2^bits-state device: topmost level at 1120 mV,
/// spacing 640/2^bits mV (80 mV for 3 bits).
DeviceParams default_device(int bits);

/// Throws std::invalid_argument when the parameter set is inconsistent.
void validate(const DeviceParams& p);

/// Nominal programmed threshold for a state index, mV.
double nominal_vth(int state, const DeviceParams& p);

/// Channel conductance in uS for a gate voltage against a threshold, both
/// mV. vth may be +infinity to model a branch that can never turn on.
[[nodiscard]] double conductance(double v_gate, double vth, const DeviceParams& p);

/// One Monte Carlo draw of a programmed threshold. sigma = 0 returns the
/// nominal value exactly and consumes no randomness.
double sample_vth(int state, const DeviceParams& p, const VariationParams& var,
                  std::mt19937_64& rng);

}  // namespace mcamsim
