#ifndef ARB_BATTERY_HPP
#define ARB_BATTERY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arb/error.hpp"

namespace arb {

// Charge or discharge rate (W per Wh of capacity) as a piecewise-linear
// function of SOC. Discharge curves store the rate magnitude; the sign is
// applied where the dynamics are integrated.
struct RateCurve {
    std::vector<std::pair<double, double>> breakpoints;  // (soc, rate)

    void validate() const {
        require(breakpoints.size() >= 2, ErrorKind::Validation,
                "rate curve needs at least 2 breakpoints");
        require(breakpoints.front().first == 0.0 && breakpoints.back().first == 1.0,
                ErrorKind::Validation, "rate curve must span soc 0..1");
        for (size_t i = 0; i < breakpoints.size(); ++i) {
            auto [s, r] = breakpoints[i];
            require(std::isfinite(s) && std::isfinite(r) && r >= 0.0,
                    ErrorKind::Validation, "rate curve values must be finite, rates >= 0");
            if (i > 0)
                require(s > breakpoints[i - 1].first, ErrorKind::Validation,
                        "rate curve soc values must be strictly increasing");
        }
    }

    double rate_at(double soc) const {
        require(soc >= 0.0 && soc <= 1.0, ErrorKind::Validation,
                "rate_at: soc outside [0,1]");
        auto it = std::lower_bound(
            breakpoints.begin(), breakpoints.end(), soc,
            [](const std::pair<double, double>& p, double s) { return p.first < s; });
        if (it == breakpoints.begin()) return it->second;
        if (it == breakpoints.end()) return breakpoints.back().second;
        if (it->first == soc) return it->second;
        auto [s1, r1] = *(it - 1);
        auto [s2, r2] = *it;
        return r1 + (r2 - r1) * (soc - s1) / (s2 - s1);
    }

    RateCurve scaled(double factor) const {
        RateCurve out = *this;
        for (auto& [s, r] : out.breakpoints) r *= factor;
        return out;
    }
};

// Stand-in lithium-ion-like curves. Charging tapers near full (CC-CV);
// discharging stays at the peak rate, which keeps a full discharge to empty
// reachable within one hour from any SOC at or below the peak rate. A
// discharge curve that tapers toward empty would make the piecewise-linear
// lower envelope vanish at SOC 0, so a schedule could never end the day at
// exactly zero charge and the terminal-empty constraint would force the
// all-idle schedule. The peak rate is 0.5 W/Wh; scale with
// RateCurve::scaled for the 1 W/Wh experiments.
inline RateCurve default_charge_curve() {
    return RateCurve{{{0.0, 0.5}, {0.5, 0.5}, {0.9, 0.15}, {1.0, 0.05}}};
}
inline RateCurve default_discharge_curve() {
    return RateCurve{{{0.0, 0.5}, {1.0, 0.5}}};
}

struct BatteryConfig {
    double q0 = 1e6;      // Wh
    double eta0 = 0.99;
    double cycle_max = 4000;
    RateCurve charge_curve = default_charge_curve();
    RateCurve discharge_curve = default_discharge_curve();
    double q_min_frac = 0.8;
    double eta_min_frac = 0.8;
    double e_init = 0.0;  // Wh at hour 0 of each day

    void validate() const {
        require(q0 > 0, ErrorKind::Validation, "Q0 must be positive");
        require(eta0 > 0 && eta0 <= 1, ErrorKind::Validation, "eta0 must be in (0,1]");
        require(cycle_max > 0, ErrorKind::Validation, "cycle_max must be positive");
        require(q_min_frac > 0 && q_min_frac <= 1, ErrorKind::Validation,
                "q_min_frac must be in (0,1]");
        require(eta_min_frac > 0 && eta_min_frac <= 1, ErrorKind::Validation,
                "eta_min_frac must be in (0,1]");
        require(e_init >= 0 && e_init <= q0, ErrorKind::Validation,
                "E_init must be in [0, Q0]");
        charge_curve.validate();
        discharge_curve.validate();
    }
};

struct BatteryState {
    int day = 0;
    double n_cycles = 0.0;
    double q = 0.0;     // Wh, today's capacity
    double eta = 0.0;   // today's discharge efficiency
    double cum_energy_exchanged = 0.0;  // Wh

    static BatteryState initial(const BatteryConfig& cfg) {
        return {0, 0.0, cfg.q0, cfg.eta0, 0.0};
    }
};

namespace battery_detail {

// Integrates d(soc)/dt = sign * f(soc) over one hour with fixed-step RK4,
// clamping soc to [0,1] and stopping once the clamp engages.
inline double integrate_hour(const RateCurve& curve, double soc0, int sign,
                             int steps = 1000) {
    const double limit = sign > 0 ? 1.0 : 0.0;
    const double h = 1.0 / steps;
    double s = soc0;
    auto f = [&](double v) { return curve.rate_at(std::clamp(v, 0.0, 1.0)); };
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(s);
        const double k2 = f(s + sign * 0.5 * h * k1);
        const double k3 = f(s + sign * 0.5 * h * k2);
        const double k4 = f(s + sign * h * k3);
        s += sign * (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        if (sign > 0 ? s >= limit : s <= limit) return limit;
    }
    return s;
}

}  // namespace battery_detail

// Maximum positive SOC change over one hour of charging from soc0.
inline double max_soc_delta(const RateCurve& charge_curve, double soc0) {
    require(soc0 >= 0.0 && soc0 <= 1.0, ErrorKind::Validation,
            "max_soc_delta: soc outside [0,1]");
    const double end = battery_detail::integrate_hour(charge_curve, soc0, +1);
    return std::min(1.0 - soc0, end - soc0);
}

// Minimum (negative) SOC change over one hour of discharging from soc0.
inline double min_soc_delta(const RateCurve& discharge_curve, double soc0) {
    require(soc0 >= 0.0 && soc0 <= 1.0, ErrorKind::Validation,
            "min_soc_delta: soc outside [0,1]");
    const double end = battery_detail::integrate_hour(discharge_curve, soc0, -1);
    return std::max(-soc0, end - soc0);
}

// SOC(0..H) induced by an hourly energy schedule (Wh, charge positive).
inline std::vector<double> soc_trajectory(double e_init,
                                          const std::vector<double>& energy,
                                          double q) {
    require(q > 0, ErrorKind::Validation, "soc_trajectory: Q must be positive");
    std::vector<double> soc(energy.size() + 1);
    double e = e_init;
    soc[0] = e / q;
    for (size_t h = 0; h < energy.size(); ++h) {
        e += energy[h];
        soc[h + 1] = e / q;
    }
    return soc;
}

// Day-to-day linear fade of capacity and efficiency, floored at the
// configured fractions of their initial values.
inline BatteryState update_degradation(const BatteryState& state,
                                       const BatteryConfig& cfg, double e_day) {
    require(e_day >= 0, ErrorKind::Validation, "update_degradation: negative daily energy");
    BatteryState next = state;
    next.day = state.day + 1;
    next.n_cycles = state.n_cycles + e_day / (2.0 * cfg.q0);
    next.cum_energy_exchanged = state.cum_energy_exchanged + e_day;
    const double alpha = cfg.q0 * (1.0 - cfg.q_min_frac) / cfg.cycle_max;
    const double beta = cfg.eta0 * (1.0 - cfg.eta_min_frac) / cfg.cycle_max;
    next.q = std::max(cfg.q_min_frac * cfg.q0, cfg.q0 - alpha * next.n_cycles);
    next.eta = std::max(cfg.eta_min_frac * cfg.eta0, cfg.eta0 - beta * next.n_cycles);
    return next;
}

// Curve CSV: header then `soc,rate_w_per_wh` rows.
inline RateCurve load_curve_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Data, "cannot open curve file: " + path);
    RateCurve curve;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        require(std::getline(ls, a, ',') && std::getline(ls, b, ','),
                ErrorKind::Data, "malformed curve row: '" + line + "'");
        curve.breakpoints.push_back({std::stod(a), std::stod(b)});
    }
    curve.validate();
    return curve;
}

}  // namespace arb

#endif
