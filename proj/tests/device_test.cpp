#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <random>

#include "mcamsim/device.hpp"

using namespace mcamsim;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("default ladders") {
    const DeviceParams d3 = default_device(3);
    REQUIRE(d3.num_levels == 8);
    const double want3[] = {560, 640, 720, 800, 880, 960, 1040, 1120};
    for (int k = 0; k < 8; ++k) CHECK(d3.vth_levels[k] == doctest::Approx(want3[k]));

    const DeviceParams d2 = default_device(2);
    REQUIRE(d2.num_levels == 4);
    const double want2[] = {640, 800, 960, 1120};
    for (int k = 0; k < 4; ++k) CHECK(d2.vth_levels[k] == doctest::Approx(want2[k]));

    CHECK_THROWS_AS(default_device(0), std::invalid_argument);
    CHECK_THROWS_AS(default_device(20), std::invalid_argument);
}

TEST_CASE("transfer curve regions") {
    const DeviceParams p = default_device(3);

    SUBCASE("deep subthreshold floors at g_off") {
        CHECK(conductance(520.0, 1120.0, p) == p.g_off);
        CHECK(conductance(0.0, 1120.0, p) == p.g_off);
        CHECK(conductance(520.0, kInf, p) == p.g_off);
    }
    SUBCASE("exponential region gains 10x per slope") {
        const double g0 = conductance(700.0, 700.0, p);
        const double g1 = conductance(700.0 + p.subthreshold_slope, 700.0, p);
        CHECK(g0 == doctest::Approx(p.g_off).epsilon(1e-12));
        CHECK(g1 / g0 == doctest::Approx(10.0).epsilon(1e-12));
        const double x = 150.0;
        const double dx = 10.0;
        const double slope = (std::log10(conductance(700.0 + x + dx, 700.0, p)) -
                              std::log10(conductance(700.0 + x, 700.0, p))) /
                             dx;
        CHECK(slope == doctest::Approx(1.0 / p.subthreshold_slope).epsilon(1e-9));
    }
    SUBCASE("continuous at the knee") {
        const double below = conductance(700.0 + p.knee_overdrive - 1e-9, 700.0, p);
        const double at = conductance(700.0 + p.knee_overdrive, 700.0, p);
        CHECK(at == doctest::Approx(below).epsilon(1e-6));
        CHECK(at == doctest::Approx(p.g_off * std::pow(10.0, p.knee_overdrive /
                                                                 p.subthreshold_slope))
                        .epsilon(1e-12));
    }
    SUBCASE("saturates exactly at g_on") {
        CHECK(conductance(700.0 + p.overdrive_sat, 700.0, p) == p.g_on);
        CHECK(conductance(700.0 + p.overdrive_sat + 500.0, 700.0, p) == p.g_on);
        CHECK(conductance(700.0 + p.overdrive_sat - 1.0, 700.0, p) < p.g_on);
    }
    SUBCASE("monotone non-decreasing over a dense overdrive grid") {
        double prev = 0.0;
        for (int i = 0; i <= 1600; ++i) {
            const double x = -800.0 + i;
            const double g = conductance(700.0 + x, 700.0, p);
            if (i > 0) CHECK(g >= prev);
            CHECK(g >= p.g_off);
            CHECK(g <= p.g_on);
            prev = g;
        }
    }
}

TEST_CASE("validate rejects broken parameter sets") {
    DeviceParams p = default_device(3);
    CHECK_NOTHROW(validate(p));

    DeviceParams bad = p;
    bad.vth_levels[3] = bad.vth_levels[2];
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = p;
    bad.g_off = bad.g_on;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = p;
    bad.knee_overdrive = bad.overdrive_sat;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = p;
    bad.vth_levels.pop_back();
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    CHECK_THROWS_AS(nominal_vth(8, p), std::out_of_range);
    CHECK_THROWS_AS(nominal_vth(-1, p), std::out_of_range);
    CHECK(nominal_vth(0, p) == doctest::Approx(560.0));
}

TEST_CASE("threshold sampling") {
    const DeviceParams p = default_device(3);

    SUBCASE("sigma 0 returns nominal and leaves the stream untouched") {
        VariationParams var;
        var.sigma = 0.0;
        std::mt19937_64 a(123), b(123);
        for (int s = 0; s < 8; ++s)
            CHECK(sample_vth(s, p, var, a) == nominal_vth(s, p));
        CHECK(a() == b());
    }
    SUBCASE("sigma 80 draws match the requested spread") {
        VariationParams var;
        var.sigma = 80.0;
        std::mt19937_64 rng(7);
        const int n = 100000;
        double sum = 0.0, ss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dv = sample_vth(3, p, var, rng) - nominal_vth(3, p);
            sum += dv;
            ss += dv * dv;
        }
        const double mean = sum / n;
        const double stddev = std::sqrt(ss / n - mean * mean);
        CHECK(std::fabs(mean) < 1.0);
        CHECK(stddev == doctest::Approx(80.0).epsilon(0.02));
    }
    SUBCASE("truncation clips the tails") {
        VariationParams var;
        var.sigma = 80.0;
        var.truncation = 2.0;
        std::mt19937_64 rng(7);
        for (int i = 0; i < 100000; ++i) {
            const double dv = sample_vth(3, p, var, rng) - nominal_vth(3, p);
            CHECK(std::fabs(dv) <= 160.0 + 1e-12);
        }
    }
}
