#ifndef ARB_TESTS_SUPPORT_HPP
#define ARB_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "arb/battery.hpp"
#include "arb/model.hpp"
#include "arb/pwl.hpp"

namespace arb::testing {

inline BatteryConfig constant_rate_battery(double rate = 0.5, double q0 = 1e6) {
    BatteryConfig cfg;
    cfg.q0 = q0;
    cfg.charge_curve = RateCurve{{{0.0, rate}, {1.0, rate}}};
    cfg.discharge_curve = RateCurve{{{0.0, rate}, {1.0, rate}}};
    return cfg;
}

// Small day problem with uniform grid costs; terminal SOC forced to zero by
// default (empty at the end of the horizon).
inline DayProblem make_problem(const std::vector<double>& prices_eur_mwh,
                               const BatteryConfig& battery, int n_int,
                               double vgc_eur_mwh = 5.0, double fgc_eur = 0.0,
                               double eta = 1.0, bool empty_at_end = true) {
    DayProblem p;
    p.date = Date{2022, 6, 1};
    p.hours = static_cast<int>(prices_eur_mwh.size());
    p.price_eur_mwh = prices_eur_mwh;
    p.vgc.assign(p.hours, vgc_eur_mwh * kEurPerMwhToEurPerWh);
    p.fgc.assign(p.hours, fgc_eur);
    p.soc_min.assign(p.hours, 0.0);
    p.soc_max.assign(p.hours, 1.0);
    if (empty_at_end) p.soc_max[p.hours - 1] = 0.0;
    p.table = build_table(battery, n_int);
    p.q = battery.q0;
    p.eta = eta;
    p.e_init = battery.e_init;
    p.big_m = battery.q0;
    return p;
}

// Random small instance for oracle cross-checks. Sizes are chosen so the
// binary count stays within the enumeration cap of 22.
inline DayProblem random_small_problem(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> shape(0, 2);
    int hours, n_int;
    switch (shape(rng)) {
        case 0: hours = 4; n_int = 2; break;
        case 1: hours = 5; n_int = 2; break;
        default: hours = 4; n_int = 3; break;
    }
    std::uniform_real_distribution<double> price(-60.0, 280.0);
    std::uniform_real_distribution<double> rate(0.15, 0.8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    BatteryConfig battery;
    battery.q0 = 1e6;
    battery.charge_curve =
        RateCurve{{{0.0, rate(rng)}, {0.5, rate(rng)}, {1.0, rate(rng)}}};
    battery.discharge_curve =
        RateCurve{{{0.0, rate(rng)}, {0.5, rate(rng)}, {1.0, rate(rng)}}};

    std::vector<double> prices(hours);
    for (double& p : prices) p = price(rng);
    const double fgc = unit(rng) < 0.3 ? 3.0 * unit(rng) : 0.0;
    const double eta = 0.9 + 0.1 * unit(rng);
    DayProblem p = make_problem(prices, battery, n_int, 5.0, fgc, eta,
                                /*empty_at_end=*/unit(rng) < 0.7);
    if (unit(rng) < 0.3) {
        // Occasionally tighten an interior SOC ceiling.
        p.soc_max[hours / 2] = 0.5 + 0.5 * unit(rng);
    }
    return p;
}

}  // namespace arb::testing

#endif
