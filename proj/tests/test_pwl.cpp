#include <cmath>

#include "arb/pwl.hpp"
#include "doctest.h"

using namespace arb;

namespace {

BatteryConfig constant_rate_config(double rate) {
    BatteryConfig cfg;
    cfg.charge_curve = RateCurve{{{0.0, rate}, {1.0, rate}}};
    cfg.discharge_curve = RateCurve{{{0.0, rate}, {1.0, rate}}};
    return cfg;
}

}  // namespace

TEST_CASE("build_table: constant rate, two intervals") {
    PwlTable t = build_table(constant_rate_config(0.5), 2);
    CHECK(t.upper[0] == doctest::Approx(0.5));
    CHECK(t.upper[1] == doctest::Approx(0.5));
    CHECK(t.upper[2] == doctest::Approx(0.0));
    CHECK(t.lower[0] == doctest::Approx(0.0));
    CHECK(t.lower[1] == doctest::Approx(-0.5));
    CHECK(t.lower[2] == doctest::Approx(-0.5));
}

TEST_CASE("build_table: single interval reduces to endpoints") {
    PwlTable t = build_table(constant_rate_config(0.5), 1);
    REQUIRE(t.upper.size() == 2);
    CHECK(t.upper[1] == 0.0);
    CHECK(t.lower[0] == 0.0);
}

TEST_CASE("build_table: cut-points match direct delta evaluation") {
    BatteryConfig cfg;  // default stand-in curves
    PwlTable t = build_table(cfg, 5);
    for (int k = 0; k <= 5; ++k) {
        const double s = k / 5.0;
        CHECK(t.upper[k] == max_soc_delta(cfg.charge_curve, s));
        CHECK(t.lower[k] == min_soc_delta(cfg.discharge_curve, s));
    }
}

TEST_CASE("build_table: rate_scale scales the sampled curves") {
    BatteryConfig cfg;
    PwlTable half = build_table(cfg, 5, 1.0);
    PwlTable full = build_table(cfg, 5, 2.0);
    for (int k = 0; k <= 5; ++k) {
        CHECK(full.upper[k] >= half.upper[k] - 1e-12);
        CHECK(full.lower[k] <= half.lower[k] + 1e-12);
    }
}

TEST_CASE("interpolate: breakpoint exactness and continuity") {
    BatteryConfig cfg;
    PwlTable t = build_table(cfg, 5);
    for (int k = 0; k <= 5; ++k) {
        auto [up, lo] = interpolate(t, k / 5.0);
        CHECK(up == doctest::Approx(t.upper[k]).epsilon(1e-12));
        CHECK(lo == doctest::Approx(t.lower[k]).epsilon(1e-12));
    }
    // continuity over a dense sweep
    double prev_up = interpolate(t, 0.0).first;
    double prev_lo = interpolate(t, 0.0).second;
    for (int i = 1; i <= 10000; ++i) {
        auto [up, lo] = interpolate(t, i / 10000.0);
        CHECK(std::fabs(up - prev_up) < 1e-3);
        CHECK(std::fabs(lo - prev_lo) < 1e-3);
        prev_up = up;
        prev_lo = lo;
    }
    CHECK_THROWS_AS(interpolate(t, -0.01), ArbError);
    CHECK_THROWS_AS(interpolate(t, 1.01), ArbError);
}

TEST_CASE("interpolate: constant tables yield constant values") {
    PwlTable t;
    t.n_int = 4;
    t.upper = {0.2, 0.2, 0.2, 0.2, 0.0};
    t.lower = {0.0, -0.2, -0.2, -0.2, -0.2};
    for (double s : {0.1, 0.3, 0.55, 0.62})
        CHECK(interpolate(t, s).first == doctest::Approx(0.2));
}

TEST_CASE("refinement never worsens the PWL error on a 1e4-point grid") {
    BatteryConfig cfg;
    const int grid = 10000;
    std::vector<double> exact_up(grid + 1), exact_lo(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        const double s = static_cast<double>(i) / grid;
        exact_up[i] = max_soc_delta(cfg.charge_curve, s);
        exact_lo[i] = min_soc_delta(cfg.discharge_curve, s);
    }
    double prev_err = -1.0;
    for (int n : {5, 10, 20}) {
        PwlTable t = build_table(cfg, n);
        double err = 0.0;
        for (int i = 0; i <= grid; ++i) {
            const double s = static_cast<double>(i) / grid;
            auto [up, lo] = interpolate(t, s);
            err = std::max(err, std::fabs(up - exact_up[i]));
            err = std::max(err, std::fabs(lo - exact_lo[i]));
        }
        if (prev_err >= 0.0) CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
}
