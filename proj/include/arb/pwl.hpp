#ifndef ARB_PWL_HPP
#define ARB_PWL_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "arb/battery.hpp"
#include "arb/error.hpp"

namespace arb {

// Breakpoint table of the hourly SOC-change envelopes at the cut-points
// k/n_int, k = 0..n_int. upper holds the max positive change, lower the
// (nonpositive) min change.
struct PwlTable {
    int n_int = 0;
    std::vector<double> upper;
    std::vector<double> lower;

    void validate() const {
        require(n_int >= 1, ErrorKind::Validation, "pwl: n_int must be >= 1");
        require(static_cast<int>(upper.size()) == n_int + 1 &&
                    static_cast<int>(lower.size()) == n_int + 1,
                ErrorKind::Validation, "pwl: table size mismatch");
        for (int k = 0; k <= n_int; ++k) {
            const double s = static_cast<double>(k) / n_int;
            require(upper[k] >= -1e-12 && upper[k] <= 1.0 - s + 1e-12,
                    ErrorKind::Invariant, "pwl: upper value outside [0, 1-s]");
            require(lower[k] <= 1e-12 && lower[k] >= -s - 1e-12,
                    ErrorKind::Invariant, "pwl: lower value outside [-s, 0]");
        }
    }
};

inline PwlTable build_table(const BatteryConfig& cfg, int n_int,
                            double rate_scale = 1.0) {
    require(n_int >= 1, ErrorKind::Validation, "build_table: n_int must be >= 1");
    require(rate_scale > 0, ErrorKind::Validation, "build_table: rate_scale must be > 0");
    const RateCurve charge = cfg.charge_curve.scaled(rate_scale);
    const RateCurve discharge = cfg.discharge_curve.scaled(rate_scale);
    PwlTable t;
    t.n_int = n_int;
    t.upper.resize(n_int + 1);
    t.lower.resize(n_int + 1);
    for (int k = 0; k <= n_int; ++k) {
        const double s = static_cast<double>(k) / n_int;
        t.upper[k] = max_soc_delta(charge, s);
        t.lower[k] = min_soc_delta(discharge, s);
    }
    t.validate();
    return t;
}

// Linear interpolation of (upper, lower) at a SOC value; exact at cut-points.
inline std::pair<double, double> interpolate(const PwlTable& t, double soc) {
    require(soc >= 0.0 && soc <= 1.0, ErrorKind::Validation,
            "interpolate: soc outside [0,1]");
    const double pos = soc * t.n_int;
    int k = static_cast<int>(pos);
    if (k >= t.n_int) k = t.n_int - 1;
    const double frac = pos - k;
    return {t.upper[k] + frac * (t.upper[k + 1] - t.upper[k]),
            t.lower[k] + frac * (t.lower[k + 1] - t.lower[k])};
}

}  // namespace arb

#endif
