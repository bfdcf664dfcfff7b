#include <cmath>

#include "arb/bnb.hpp"
#include "arb/model.hpp"
#include "arb/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace arb;
using namespace arb::testing;

TEST_CASE("build_milp: variable and binary counts for the full day") {
    BatteryConfig battery;
    DayProblem p = make_problem(std::vector<double>(24, 100.0), battery, 5);
    MilpInstance inst = build_milp(p);
    CHECK(inst.num_vars() == 480);   // 24 * (3 + 2 + 3*5)
    CHECK(inst.num_binaries() == 168);  // 24 * (2 + 5)
    inst.validate();
}

TEST_CASE("build_milp: all soc_max = 0 forces the zero schedule") {
    DayProblem p = make_problem({50.0, 80.0, 20.0, 90.0}, constant_rate_battery(), 2);
    for (auto& m : p.soc_max) m = 0.0;
    Solution s = solve(build_milp(p));
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(0.0).epsilon(1e-9));
    Schedule sched = extract_schedule(p, s);
    for (double e : sched.energy_wh) CHECK(e == doctest::Approx(0.0));
}

TEST_CASE("build_milp: equal prices with vgc > 0 yield zero profit") {
    DayProblem p = make_problem({100.0, 100.0, 100.0, 100.0},
                                constant_rate_battery(), 2);
    Solution milp = solve(build_milp(p));
    REQUIRE(milp.status == SolveStatus::Optimal);
    CHECK(milp.objective == doctest::Approx(0.0).epsilon(1e-9));
    // Cross-check with the exhaustive oracle on the same instance.
    Solution enumd = enumerate_optimal(build_milp(p));
    CHECK(enumd.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("build_milp: rejects inconsistent SOC bounds") {
    DayProblem p = make_problem({10.0, 20.0}, constant_rate_battery(), 2);
    p.soc_min[0] = 0.7;
    p.soc_max[0] = 0.3;
    CHECK_THROWS_AS(build_milp(p), ArbError);
}

TEST_CASE("two-hour toy: buy low sell high") {
    // Buy 0.5 MWh at 10, sell at 50, vgc 5 EUR/MWh.
    DayProblem p = make_problem({10.0, 50.0}, constant_rate_battery(0.5), 2);

    SUBCASE("eta = 1 gives 15 EUR") {
        Solution s = solve(build_milp(p));
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(s.objective == doctest::Approx(-15.0).epsilon(1e-9));
        Schedule sched = extract_schedule(p, s);
        CHECK(sched.energy_wh[0] == doctest::Approx(5e5));
        CHECK(sched.energy_wh[1] == doctest::Approx(-5e5));
        CHECK(schedule_profit(sched, p.price_eur_mwh, p.eta, p.vgc, p.fgc,
                              p.epsilon) == doctest::Approx(15.0));
    }
    SUBCASE("eta = 0.99 gives 14.775 EUR") {
        p.eta = 0.99;
        Solution s = solve(build_milp(p));
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(s.objective == doctest::Approx(-14.775).epsilon(1e-9));
    }
}

TEST_CASE("extract_schedule: invariants and tampering detection") {
    DayProblem p = make_problem({10.0, 50.0}, constant_rate_battery(0.5), 2);
    Solution s = solve(build_milp(p));
    REQUIRE(s.status == SolveStatus::Optimal);
    Schedule ok = extract_schedule(p, s);
    CHECK(ok.energy_wh.size() == 2);

    SUBCASE("simultaneous charge and discharge is rejected") {
        Solution bad = s;
        MilpLayout L{p.hours, p.table.n_int};
        bad.values[L.ep(0)] = 2e5;
        bad.values[L.em(0)] = 1e5;
        CHECK_THROWS_AS(extract_schedule(p, bad), ArbError);
    }
    SUBCASE("energy beyond the PWL envelope is rejected") {
        Solution bad = s;
        MilpLayout L{p.hours, p.table.n_int};
        bad.values[L.e(0)] = 0.9e6;  // above Q * 0.5
        CHECK_THROWS_AS(extract_schedule(p, bad), ArbError);
    }
}

TEST_CASE("negated objective equals schedule_profit on the same prices") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 10; ++rep) {
        DayProblem p = random_small_problem(rng);
        Solution s = solve(build_milp(p));
        if (s.status != SolveStatus::Optimal) continue;
        Schedule sched = extract_schedule(p, s);
        const double profit =
            schedule_profit(sched, p.price_eur_mwh, p.eta, p.vgc, p.fgc, p.epsilon);
        CHECK(profit ==
              doctest::Approx(-s.objective).epsilon(1e-6).scale(
                  std::max(1.0, std::fabs(s.objective))));
    }
}

TEST_CASE("schedule_profit: zero schedule and shift covariance") {
    Schedule zero{Date{2022, 6, 1}, {0.0, 0.0, 0.0}};
    std::vector<double> prices{30.0, 70.0, 50.0};
    std::vector<double> vgc(3, 5e-6), fgc(3, 0.0);
    CHECK(schedule_profit(zero, prices, 0.95, vgc, fgc, 0.01) == 0.0);

    Schedule s{Date{2022, 6, 1}, {4e5, -1e5, -3e5}};
    const double eta = 0.97;
    const double base = schedule_profit(s, prices, eta, vgc, fgc, 0.01);
    const double c = 25.0;
    std::vector<double> shifted{prices[0] + c, prices[1] + c, prices[2] + c};
    const double after = schedule_profit(s, shifted, eta, vgc, fgc, 0.01);
    const double sum_pos = 4e5, sum_neg = 4e5;
    CHECK(after - base ==
          doctest::Approx(-c * (sum_pos - eta * sum_neg) * 1e-6).epsilon(1e-9));
}

TEST_CASE("price shift leaves the optimal schedule unchanged when eta = 1") {
    DayProblem p = make_problem({20.0, 90.0, 40.0, 120.0},
                                constant_rate_battery(0.4), 2);
    Schedule a = extract_schedule(p, solve(build_milp(p)));
    for (double& v : p.price_eur_mwh) v += 80.0;
    Schedule b = extract_schedule(p, solve(build_milp(p)));
    for (int h = 0; h < p.hours; ++h)
        CHECK(a.energy_wh[h] == doctest::Approx(b.energy_wh[h]).epsilon(1e-6));
}

TEST_CASE("feasible-set monotonicity: faster rates never hurt") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 5; ++rep) {
        DayProblem p = random_small_problem(rng);
        DayProblem fast = p;
        // Rebuild the table from scaled-up envelopes.
        for (auto& v : fast.table.upper) v = std::min(1.0, 1.5 * v);
        for (size_t k = 0; k < fast.table.upper.size(); ++k) {
            const double s = static_cast<double>(k) / fast.table.n_int;
            fast.table.upper[k] = std::min(1.0 - s, 1.5 * p.table.upper[k]);
            fast.table.lower[k] = std::max(-s, 1.5 * p.table.lower[k]);
        }
        Solution slow_sol = solve(build_milp(p));
        Solution fast_sol = solve(build_milp(fast));
        REQUIRE(slow_sol.status == SolveStatus::Optimal);
        REQUIRE(fast_sol.status == SolveStatus::Optimal);
        CHECK(fast_sol.objective <=
              slow_sol.objective + 1e-6 * std::max(1.0, std::fabs(slow_sol.objective)));
    }
}
