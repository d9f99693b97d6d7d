#include "mcamsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mcamsim {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of empty range");
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

double linear_r2(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("linear_r2: size mismatch");
    if (x.size() < 3)
        throw std::invalid_argument("linear_r2: need at least 3 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0)
        throw std::invalid_argument("linear_r2: x values are all equal");
    if (syy == 0.0) return 1.0;
    return (sxy * sxy) / (sxx * syy);
}

}  // namespace mcamsim
