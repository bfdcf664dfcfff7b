#include <cmath>

#include "arb/battery.hpp"
#include "doctest.h"

using namespace arb;

namespace {

RateCurve constant_curve(double rate) {
    return RateCurve{{{0.0, rate}, {1.0, rate}}};
}

// Independent fine-step explicit-Euler reference for the hourly SOC change.
double euler_delta(const RateCurve& curve, double soc0, int sign,
                   long steps = 1000000) {
    const double h = 1.0 / steps;
    double s = soc0;
    for (long i = 0; i < steps; ++i) {
        s += sign * h * curve.rate_at(std::clamp(s, 0.0, 1.0));
        if (sign > 0 && s >= 1.0) return 1.0 - soc0;
        if (sign < 0 && s <= 0.0) return -soc0;
    }
    return s - soc0;
}

}  // namespace

TEST_CASE("rate_at: interpolation and breakpoints") {
    RateCurve c{{{0.0, 0.5}, {0.5, 0.5}, {1.0, 0.1}}};
    c.validate();
    CHECK(c.rate_at(0.3) == doctest::Approx(0.5));
    CHECK(c.rate_at(0.75) == doctest::Approx(0.3));
    CHECK(c.rate_at(0.5) == doctest::Approx(0.5));
    CHECK(c.rate_at(1.0) == doctest::Approx(0.1));
    CHECK(c.rate_at(0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(c.rate_at(1.5), ArbError);
}

TEST_CASE("max_soc_delta: constant rate cases") {
    RateCurve c = constant_curve(0.5);
    CHECK(max_soc_delta(c, 0.0) == doctest::Approx(0.5));
    CHECK(max_soc_delta(c, 0.8) == doctest::Approx(0.2));  // capped at full
    CHECK(max_soc_delta(c, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("min_soc_delta: constant rate cases") {
    RateCurve c = constant_curve(0.5);
    CHECK(min_soc_delta(c, 1.0) == doctest::Approx(-0.5));
    CHECK(min_soc_delta(c, 0.2) == doctest::Approx(-0.2));  // floored at empty
    CHECK(min_soc_delta(c, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("soc deltas agree with a 1e6-step Euler reference") {
    const RateCurve charge = default_charge_curve();
    const RateCurve discharge = default_discharge_curve();
    for (double s : {0.0, 0.1, 0.35, 0.6, 0.85, 1.0}) {
        CHECK(max_soc_delta(charge, s) ==
              doctest::Approx(std::min(1.0 - s, euler_delta(charge, s, +1)))
                  .epsilon(1e-6));
        CHECK(min_soc_delta(discharge, s) ==
              doctest::Approx(std::max(-s, euler_delta(discharge, s, -1)))
                  .epsilon(1e-6));
    }
}

TEST_CASE("soc delta bounds and endpoint identities") {
    const RateCurve charge = default_charge_curve();
    const RateCurve discharge = default_discharge_curve();
    for (int i = 0; i <= 50; ++i) {
        const double s = i / 50.0;
        const double up = max_soc_delta(charge, s);
        const double lo = min_soc_delta(discharge, s);
        CHECK(up >= 0.0);
        CHECK(up <= 1.0 - s + 1e-12);
        CHECK(lo <= 0.0);
        CHECK(lo >= -s - 1e-12);
    }
    CHECK(max_soc_delta(charge, 1.0) == 0.0);
    CHECK(min_soc_delta(discharge, 0.0) == 0.0);
}

TEST_CASE("scaling the rate curve weakly increases the max delta") {
    const RateCurve base = default_charge_curve();
    const RateCurve fast = base.scaled(2.0);
    for (int i = 0; i <= 20; ++i) {
        const double s = i / 20.0;
        CHECK(max_soc_delta(fast, s) >= max_soc_delta(base, s) - 1e-12);
    }
}

TEST_CASE("symmetric curves mirror the two deltas") {
    // f_d(s) = f_c(1-s): discharging from s matches charging from 1-s.
    const RateCurve charge = default_charge_curve();
    RateCurve mirrored;
    for (auto it = charge.breakpoints.rbegin(); it != charge.breakpoints.rend(); ++it)
        mirrored.breakpoints.push_back({1.0 - it->first, it->second});
    mirrored.validate();
    for (double s : {0.1, 0.4, 0.7, 0.95})
        CHECK(min_soc_delta(mirrored, s) ==
              doctest::Approx(-max_soc_delta(charge, 1.0 - s)).epsilon(1e-9));
}

TEST_CASE("soc_trajectory recursion and telescoping") {
    auto soc = soc_trajectory(0.0, {500.0, 0.0, -200.0}, 1000.0);
    REQUIRE(soc.size() == 4);
    CHECK(soc[0] == doctest::Approx(0.0));
    CHECK(soc[1] == doctest::Approx(0.5));
    CHECK(soc[2] == doctest::Approx(0.5));
    CHECK(soc[3] == doctest::Approx(0.3));

    auto flat = soc_trajectory(250.0, std::vector<double>(24, 0.0), 1000.0);
    for (double s : flat) CHECK(s == doctest::Approx(0.25));
}

TEST_CASE("degradation: alpha, cycle counting, floors") {
    BatteryConfig cfg;
    cfg.q0 = 1e6;
    cfg.cycle_max = 4000;
    cfg.validate();
    // alpha = (1e6 - 0.8e6)/4000 = 50 Wh per cycle
    BatteryState s = BatteryState::initial(cfg);
    BatteryState s1 = update_degradation(s, cfg, 2.0 * cfg.q0);
    CHECK(s1.n_cycles == doctest::Approx(1.0));
    CHECK(s1.q == doctest::Approx(1e6 - 50.0));
    CHECK(s1.day == 1);

    // Past cycle life both parameters sit on their floors.
    BatteryState worn = s;
    worn.n_cycles = cfg.cycle_max;
    BatteryState w1 = update_degradation(worn, cfg, 2.0 * cfg.q0);
    CHECK(w1.q == doctest::Approx(0.8 * cfg.q0));
    CHECK(w1.eta == doctest::Approx(0.8 * cfg.eta0));
    BatteryState w2 = update_degradation(w1, cfg, 2.0 * cfg.q0);
    CHECK(w2.q == doctest::Approx(0.8 * cfg.q0));
    CHECK(w2.eta == doctest::Approx(0.8 * cfg.eta0));
}

TEST_CASE("degradation: monotone under any daily sequence, off at infinite life") {
    BatteryConfig cfg;
    cfg.validate();
    BatteryState s = BatteryState::initial(cfg);
    double daily[] = {0.0, 1.5e6, 2e6, 0.3e6, 2e6, 1e6};
    for (double e : daily) {
        BatteryState n = update_degradation(s, cfg, e);
        CHECK(n.q <= s.q);
        CHECK(n.eta <= s.eta);
        CHECK(n.n_cycles >= s.n_cycles);
        s = n;
    }
    CHECK_THROWS_AS(update_degradation(s, cfg, -1.0), ArbError);

    BatteryConfig immortal = cfg;
    immortal.cycle_max = std::numeric_limits<double>::infinity();
    BatteryState t = BatteryState::initial(immortal);
    for (double e : daily) t = update_degradation(t, immortal, e);
    CHECK(t.q == immortal.q0);
    CHECK(t.eta == immortal.eta0);
}
