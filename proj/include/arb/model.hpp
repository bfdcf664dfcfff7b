#ifndef ARB_MODEL_HPP
#define ARB_MODEL_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "arb/date.hpp"
#include "arb/error.hpp"
#include "arb/milp.hpp"
#include "arb/prices.hpp"
#include "arb/pwl.hpp"

namespace arb {

constexpr double kEurPerMwhToEurPerWh = 1e-6;

// Per-hour grid tariffs. vgc is EUR per Wh exchanged, fgc a flat EUR charge
// for every hour with nonzero exchange.
struct GridCostSchedule {
    std::array<double, 24> vgc{};  // EUR/Wh
    std::array<double, 24> fgc{};  // EUR

    static GridCostSchedule uniform(double vgc_eur_mwh, double fgc_eur) {
        GridCostSchedule g;
        g.vgc.fill(vgc_eur_mwh * kEurPerMwhToEurPerWh);
        g.fgc.fill(fgc_eur);
        return g;
    }
};

// SOC bounds at the end of hours 1..24 (index h-1).
struct AvailabilityBounds {
    std::array<double, 24> soc_min{};
    std::array<double, 24> soc_max{};

    static AvailabilityBounds open_with_terminal(double terminal_soc_max = 0.0) {
        AvailabilityBounds b;
        b.soc_min.fill(0.0);
        b.soc_max.fill(1.0);
        b.soc_max[23] = terminal_soc_max;
        return b;
    }

    void validate() const {
        for (int h = 0; h < 24; ++h)
            require(soc_min[h] >= 0 && soc_min[h] <= soc_max[h] && soc_max[h] <= 1,
                    ErrorKind::Validation,
                    "availability bounds out of order at hour " + std::to_string(h + 1));
    }
};

// One day's optimization input. Stored as vectors sized `hours` so tests can
// pose truncated days; production days have hours = 24.
struct DayProblem {
    Date date;
    int hours = 24;
    std::vector<double> price_eur_mwh;
    std::vector<double> vgc;  // EUR/Wh
    std::vector<double> fgc;  // EUR
    std::vector<double> soc_min;  // bound on SOC at end of hour h+1
    std::vector<double> soc_max;
    PwlTable table;
    double q = 0.0;       // today's capacity Q(d), Wh
    double eta = 1.0;     // today's discharge efficiency
    double e_init = 0.0;  // Wh
    double big_m = 0.0;   // Wh
    double epsilon = 0.01;  // Wh

    static DayProblem from_day(const DayPrices& prices, const GridCostSchedule& grid,
                               const AvailabilityBounds& bounds, PwlTable table,
                               double q, double eta, double e_init, double big_m,
                               double epsilon = 0.01) {
        DayProblem p;
        p.date = prices.date;
        p.hours = 24;
        p.price_eur_mwh.assign(prices.values.begin(), prices.values.end());
        p.vgc.assign(grid.vgc.begin(), grid.vgc.end());
        p.fgc.assign(grid.fgc.begin(), grid.fgc.end());
        p.soc_min.assign(bounds.soc_min.begin(), bounds.soc_min.end());
        p.soc_max.assign(bounds.soc_max.begin(), bounds.soc_max.end());
        p.table = std::move(table);
        p.q = q;
        p.eta = eta;
        p.e_init = e_init;
        p.big_m = big_m;
        p.epsilon = epsilon;
        return p;
    }

    void validate() const {
        require(hours >= 1, ErrorKind::Validation, "day needs at least one hour");
        require(q > 0, ErrorKind::Validation, "capacity must be positive");
        require(e_init >= 0 && e_init <= q, ErrorKind::Validation,
                "E_init outside [0, Q]");
        require(epsilon > 0, ErrorKind::Validation, "epsilon must be positive");
        require(big_m >= q, ErrorKind::Validation, "big_M must be at least Q");
        const auto n = static_cast<size_t>(hours);
        require(price_eur_mwh.size() == n && vgc.size() == n && fgc.size() == n &&
                    soc_min.size() == n && soc_max.size() == n,
                ErrorKind::Validation, "day problem vectors must have `hours` entries");
        for (int h = 0; h < hours; ++h) {
            require(std::isfinite(price_eur_mwh[h]), ErrorKind::Validation,
                    "non-finite price");
            require(vgc[h] >= 0 && fgc[h] >= 0, ErrorKind::Validation,
                    "grid costs must be nonnegative");
            require(soc_min[h] >= 0 && soc_min[h] <= soc_max[h] && soc_max[h] <= 1,
                    ErrorKind::Validation,
                    "infeasible SOC bounds at hour " + std::to_string(h + 1));
        }
        table.validate();
    }
};

// Index layout of the day MILP: one block of 5 + 3*n_int variables per hour,
// ordered E, E+, E-, y, z, then (lambda_k, mu_k, yk_k) for k = 1..n_int.
struct MilpLayout {
    int hours = 0;
    int n_int = 0;

    int block() const { return 5 + 3 * n_int; }
    int e(int h) const { return h * block(); }
    int ep(int h) const { return h * block() + 1; }
    int em(int h) const { return h * block() + 2; }
    int y(int h) const { return h * block() + 3; }
    int z(int h) const { return h * block() + 4; }
    int lam(int h, int k) const { return h * block() + 5 + 3 * (k - 1); }
    int mu(int h, int k) const { return h * block() + 5 + 3 * (k - 1) + 1; }
    int yk(int h, int k) const { return h * block() + 5 + 3 * (k - 1) + 2; }
    int num_vars() const { return hours * block(); }
};

// Assembles the day's scheduling MILP: the convex-combination encoding of
// the SOC-change envelopes, SOC availability rows, charge/discharge split
// with big-M direction binaries, and the epsilon-activity linking. SOC rows
// are scaled by Q so all energies stay in Wh.
inline MilpInstance build_milp(const DayProblem& p) {
    p.validate();
    const int H = p.hours;
    const int N = p.table.n_int;
    const MilpLayout L{H, N};
    MilpInstance inst;
    inst.name = "day_" + p.date.to_string();
    inst.vars.reserve(L.num_vars());

    for (int h = 0; h < H; ++h) {
        const std::string hs = std::to_string(h);
        inst.add_var("E_" + hs, -p.q, p.q);
        inst.add_var("Ep_" + hs, 0.0, p.big_m);
        inst.add_var("Em_" + hs, 0.0, p.big_m);
        inst.add_var("y_" + hs, 0.0, 1.0, VarType::Binary);
        inst.add_var("z_" + hs, 0.0, 1.0, VarType::Binary);
        for (int k = 1; k <= N; ++k) {
            const std::string ks = hs + "_" + std::to_string(k);
            inst.add_var("lam_" + ks, 0.0, 1.0);
            inst.add_var("mu_" + ks, 0.0, 1.0);
            inst.add_var("yk_" + ks, 0.0, 1.0, VarType::Binary);
        }
    }

    for (int h = 0; h < H; ++h) {
        const std::string hs = std::to_string(h);

        // Convex-combination weights reproduce SOC(h) (row scaled by Q):
        // Q*sum_k(lam*(k-1)/N + mu*k/N) - sum_{t<h} E(t) = E_init
        std::vector<std::pair<int, double>> soc_row;
        for (int k = 1; k <= N; ++k) {
            soc_row.push_back({L.lam(h, k), p.q * (k - 1) / N});
            soc_row.push_back({L.mu(h, k), p.q * k / N});
        }
        for (int t = 0; t < h; ++t) soc_row.push_back({L.e(t), -1.0});
        inst.add_con(std::move(soc_row), Relation::EQ, p.e_init, "cc_soc_" + hs);

        // One interval selected; weights tied to the selector.
        for (int k = 1; k <= N; ++k)
            inst.add_con({{L.lam(h, k), 1.0}, {L.mu(h, k), 1.0}, {L.yk(h, k), -1.0}},
                         Relation::EQ, 0.0, "sel_" + hs + "_" + std::to_string(k));
        {
            std::vector<std::pair<int, double>> one;
            for (int k = 1; k <= N; ++k) one.push_back({L.yk(h, k), 1.0});
            inst.add_con(std::move(one), Relation::EQ, 1.0, "one_" + hs);
        }

        // Energy change within the interpolated envelopes.
        std::vector<std::pair<int, double>> emax{{L.e(h), 1.0}};
        std::vector<std::pair<int, double>> emin{{L.e(h), 1.0}};
        for (int k = 1; k <= N; ++k) {
            emax.push_back({L.lam(h, k), -p.q * p.table.upper[k - 1]});
            emax.push_back({L.mu(h, k), -p.q * p.table.upper[k]});
            emin.push_back({L.lam(h, k), -p.q * p.table.lower[k - 1]});
            emin.push_back({L.mu(h, k), -p.q * p.table.lower[k]});
        }
        inst.add_con(std::move(emax), Relation::LE, 0.0, "emax_" + hs);
        inst.add_con(std::move(emin), Relation::GE, 0.0, "emin_" + hs);

        // Charge/discharge split with direction binary.
        inst.add_con({{L.ep(h), 1.0}, {L.em(h), -1.0}, {L.e(h), -1.0}},
                     Relation::EQ, 0.0, "split_" + hs);
        inst.add_con({{L.ep(h), 1.0}, {L.y(h), -p.big_m}}, Relation::LE, 0.0,
                     "bigp_" + hs);
        inst.add_con({{L.em(h), 1.0}, {L.y(h), p.big_m}}, Relation::LE, p.big_m,
                     "bigm_" + hs);

        // Activity linking: z = 1 exactly when energy is exchanged.
        inst.add_con({{L.ep(h), 1.0}, {L.em(h), 1.0}, {L.z(h), -p.epsilon}},
                     Relation::GE, 0.0, "actlo_" + hs);
        inst.add_con({{L.ep(h), 1.0}, {L.em(h), 1.0}, {L.z(h), -p.big_m}},
                     Relation::LE, 0.0, "acthi_" + hs);

        // Availability bounds on SOC at the end of hour h (scaled by Q).
        std::vector<std::pair<int, double>> cum;
        for (int t = 0; t <= h; ++t) cum.push_back({L.e(t), 1.0});
        inst.add_con(cum, Relation::GE, p.q * p.soc_min[h] - p.e_init, "slo_" + hs);
        inst.add_con(std::move(cum), Relation::LE, p.q * p.soc_max[h] - p.e_init,
                     "shi_" + hs);

        // Objective (minimize -profit), prices converted to EUR/Wh.
        const double p_wh = p.price_eur_mwh[h] * kEurPerMwhToEurPerWh;
        inst.objective[L.ep(h)] = p_wh + p.vgc[h];
        inst.objective[L.em(h)] = -p.eta * p_wh + p.eta * p.vgc[h];
        inst.objective[L.z(h)] = p.fgc[h];
    }
    return inst;
}

struct Schedule {
    Date date;
    std::vector<double> energy_wh;  // charge positive, discharge negative
};

// Realized profit of a schedule in EUR: sales at eta*(p - vgc) per Wh
// discharged, purchases at (p + vgc) per Wh charged, fgc on active hours.
inline double schedule_profit(const Schedule& s,
                              const std::vector<double>& price_eur_mwh,
                              double eta, const std::vector<double>& vgc,
                              const std::vector<double>& fgc, double epsilon) {
    require(s.energy_wh.size() == price_eur_mwh.size(), ErrorKind::Validation,
            "schedule_profit: size mismatch");
    double profit = 0.0;
    for (size_t h = 0; h < s.energy_wh.size(); ++h) {
        const double e = s.energy_wh[h];
        const double p_wh = price_eur_mwh[h] * kEurPerMwhToEurPerWh;
        if (e > 0) profit -= e * (p_wh + vgc[h]);
        else profit += eta * (-e) * (p_wh - vgc[h]);
        if (std::fabs(e) >= epsilon * (1.0 - 1e-9)) profit -= fgc[h];
    }
    return profit;
}

inline double schedule_profit(const Schedule& s, const DayPrices& prices,
                              double eta, const GridCostSchedule& grid,
                              double epsilon = 0.01) {
    return schedule_profit(
        s, std::vector<double>(prices.values.begin(), prices.values.end()), eta,
        std::vector<double>(grid.vgc.begin(), grid.vgc.end()),
        std::vector<double>(grid.fgc.begin(), grid.fgc.end()), epsilon);
}

// Reads the hourly energies out of a solution and asserts the schedule
// invariants against the problem. A violation here means a solver or model
// bug, not bad input data.
inline Schedule extract_schedule(const DayProblem& p, const Solution& sol) {
    require(sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Feasible ||
                sol.status == SolveStatus::LimitReached,
            ErrorKind::Solver, "extract_schedule: no usable solution");
    require(!sol.values.empty(), ErrorKind::Solver, "extract_schedule: empty solution");
    const MilpLayout L{p.hours, p.table.n_int};
    const double tol = 1e-6 * p.q;

    Schedule s;
    s.date = p.date;
    s.energy_wh.resize(p.hours);
    for (int h = 0; h < p.hours; ++h) {
        s.energy_wh[h] = sol.values[L.e(h)];
        const double ep = sol.values[L.ep(h)];
        const double em = sol.values[L.em(h)];
        require(std::min(ep, em) <= tol, ErrorKind::Invariant,
                "E+/E- complementarity violated at hour " + std::to_string(h));
        const double z = sol.values[L.z(h)];
        const double activity = ep + em;
        if (z < 0.5)
            require(activity <= tol, ErrorKind::Invariant,
                    "activity with z=0 at hour " + std::to_string(h));
        else
            require(activity >= p.epsilon - tol, ErrorKind::Invariant,
                    "z=1 with activity below epsilon at hour " + std::to_string(h));
    }

    double stored = p.e_init;
    for (int h = 0; h < p.hours; ++h) {
        const double soc = std::clamp(stored / p.q, 0.0, 1.0);
        auto [up, lo] = interpolate(p.table, soc);
        require(s.energy_wh[h] <= p.q * up + tol, ErrorKind::Invariant,
                "energy above PWL upper bound at hour " + std::to_string(h));
        require(s.energy_wh[h] >= p.q * lo - tol, ErrorKind::Invariant,
                "energy below PWL lower bound at hour " + std::to_string(h));
        stored += s.energy_wh[h];
        const double soc_end = stored / p.q;
        require(soc_end >= p.soc_min[h] - 1e-6 && soc_end <= p.soc_max[h] + 1e-6,
                ErrorKind::Invariant,
                "SOC bound violated at end of hour " + std::to_string(h + 1));
    }
    return s;
}

}  // namespace arb

#endif
