#include "mcamsim/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mcamsim {

DeviceParams default_device(int bits) {
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("device bits must be in [1, 16], got " +
                                    std::to_string(bits));
    DeviceParams p;
    p.num_levels = 1 << bits;
    const double spacing = 640.0 / p.num_levels;
    const double top = 1120.0;
    p.vth_levels.resize(p.num_levels);
    for (int k = 0; k < p.num_levels; ++k)
        p.vth_levels[k] = top - spacing * (p.num_levels - 1 - k);
    return p;
}

void validate(const DeviceParams& p) {
    if (p.num_levels < 2)
        throw std::invalid_argument("device needs at least 2 levels");
    if (static_cast<int>(p.vth_levels.size()) != p.num_levels)
        throw std::invalid_argument("vth_levels size " +
                                    std::to_string(p.vth_levels.size()) +
                                    " does not match num_levels " +
                                    std::to_string(p.num_levels));
    for (int k = 1; k < p.num_levels; ++k)
        if (!(p.vth_levels[k] > p.vth_levels[k - 1]))
            throw std::invalid_argument("vth_levels must be strictly increasing");
    if (!(p.g_off > 0.0) || !(p.g_on > p.g_off))
        throw std::invalid_argument("need 0 < g_off < g_on");
    if (!(p.subthreshold_slope > 0.0))
        throw std::invalid_argument("subthreshold_slope must be positive");
    if (!(p.knee_overdrive > 0.0) || !(p.overdrive_sat > p.knee_overdrive))
        throw std::invalid_argument("need 0 < knee_overdrive < overdrive_sat");
}

double nominal_vth(int state, const DeviceParams& p) {
    if (state < 0 || state >= p.num_levels)
        throw std::out_of_range("state " + std::to_string(state) +
                                " outside [0, " + std::to_string(p.num_levels) + ")");
    return p.vth_levels[state];
}

double conductance(double v_gate, double vth, const DeviceParams& p) {
    const double x = v_gate - vth;  // -inf when vth is +inf
    if (x >= p.overdrive_sat) return p.g_on;
    if (x >= p.knee_overdrive) {
        const double g_knee =
            p.g_off * std::pow(10.0, p.knee_overdrive / p.subthreshold_slope);
        const double u = (p.overdrive_sat - x) / (p.overdrive_sat - p.knee_overdrive);
        return g_knee + (p.g_on - g_knee) * (1.0 - u * u);
    }
    const double g = p.g_off * std::pow(10.0, x / p.subthreshold_slope);
    return std::fmax(p.g_off, std::fmin(g, p.g_on));
}

double sample_vth(int state, const DeviceParams& p, const VariationParams& var,
                  std::mt19937_64& rng) {
    const double nominal = nominal_vth(state, p);
    if (var.sigma <= 0.0) return nominal;
    std::normal_distribution<double> gauss(0.0, var.sigma);
    double dv = gauss(rng);
    if (var.truncation > 0.0) {
        const double bound = var.truncation * var.sigma;
        dv = std::clamp(dv, -bound, bound);
    }
    return nominal + dv;
}

}  // namespace mcamsim
