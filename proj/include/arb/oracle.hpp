#ifndef ARB_ORACLE_HPP
#define ARB_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "arb/error.hpp"
#include "arb/milp.hpp"
#include "arb/model.hpp"
#include "arb/simplex.hpp"

namespace arb {

// Ground truth by brute force: iterates every 0/1 assignment of the binary
// variables, solves the continuous LP that remains, and keeps the best
// feasible objective. Assignments that already violate an all-binary row are
// rejected without a simplex call.
inline Solution enumerate_optimal(const MilpInstance& inst,
                                  const SolverOptions& opts = {}) {
    inst.validate();
    const int n = inst.num_vars();
    std::vector<int> binaries;
    for (int j = 0; j < n; ++j)
        if (inst.vars[j].type == VarType::Binary) binaries.push_back(j);
    const int nb = static_cast<int>(binaries.size());
    require(nb <= 22, ErrorKind::Validation,
            "enumerate_optimal: too many binaries (" + std::to_string(nb) + ")");

    // Rows supported entirely on binaries can be checked per assignment.
    std::vector<bool> is_binary(n, false);
    for (int j : binaries) is_binary[j] = true;
    std::vector<const Constraint*> binary_rows;
    for (const auto& c : inst.cons) {
        bool all = true;
        for (auto [j, a] : c.coef)
            if (!is_binary[j]) { all = false; break; }
        if (all) binary_rows.push_back(&c);
    }

    std::vector<double> lb(n), ub(n);
    for (int j = 0; j < n; ++j) {
        lb[j] = inst.vars[j].lb;
        ub[j] = inst.vars[j].ub;
    }

    Solution best;
    best.status = SolveStatus::Infeasible;
    best.objective = kInf;
    for (std::uint32_t mask = 0; mask < (1u << nb); ++mask) {
        bool reject = false;
        for (const Constraint* c : binary_rows) {
            double act = 0.0;
            for (size_t t = 0; t < c->coef.size(); ++t) {
                const auto [j, a] = c->coef[t];
                const int bit = static_cast<int>(
                    std::find(binaries.begin(), binaries.end(), j) - binaries.begin());
                act += a * ((mask >> bit) & 1u);
            }
            const double tol = 1e-9;
            if ((c->rel == Relation::LE && act > c->rhs + tol) ||
                (c->rel == Relation::GE && act < c->rhs - tol) ||
                (c->rel == Relation::EQ && std::fabs(act - c->rhs) > tol)) {
                reject = true;
                break;
            }
        }
        if (reject) continue;
        for (int b = 0; b < nb; ++b) {
            const double v = (mask >> b) & 1u;
            lb[binaries[b]] = v;
            ub[binaries[b]] = v;
        }
        Solution lp = solve_lp_bounded(inst, lb, ub, opts);
        best.stats.simplex_iterations += lp.stats.simplex_iterations;
        if (lp.status == SolveStatus::Optimal && lp.objective < best.objective) {
            best.status = SolveStatus::Optimal;
            best.objective = lp.objective;
            best.values = lp.values;
        }
    }
    best.bound = best.objective;
    best.gap = 0.0;
    return best;
}

struct DpConfig {
    int grid_points = 201;  // SOC levels in [0,1] before adding cut-points

    void validate() const {
        require(grid_points >= 2, ErrorKind::Validation, "dp: grid_points must be >= 2");
    }
};

struct DpResult {
    Schedule schedule;
    double profit = 0.0;
};

// Independent check of the day model: value iteration over a SOC grid. The
// grid always contains the PWL cut-points so the envelopes are evaluated
// exactly at grid states; every grid-to-grid move within the envelope is a
// transition. Optimizes over a restricted schedule set, so its profit is a
// lower bound on the MILP optimum.
inline DpResult dp_schedule(const DayProblem& p, const DpConfig& cfg) {
    p.validate();
    cfg.validate();
    const int H = p.hours;

    std::vector<double> grid;
    for (int i = 0; i < cfg.grid_points; ++i)
        grid.push_back(static_cast<double>(i) / (cfg.grid_points - 1));
    for (int k = 0; k <= p.table.n_int; ++k)
        grid.push_back(static_cast<double>(k) / p.table.n_int);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
               grid.end());
    const int G = static_cast<int>(grid.size());

    auto feasible_state = [&](int h_end, double s) {
        // h_end in 1..H; bounds arrays are indexed by h_end-1
        return s >= p.soc_min[h_end - 1] - 1e-12 && s <= p.soc_max[h_end - 1] + 1e-12;
    };
    auto stage_reward = [&](int h, double e) {
        const double p_wh = p.price_eur_mwh[h] * kEurPerMwhToEurPerWh;
        double r = e > 0 ? -e * (p_wh + p.vgc[h]) : p.eta * (-e) * (p_wh - p.vgc[h]);
        if (e != 0.0) r -= p.fgc[h];
        return r;
    };

    const double neg_inf = -kInf;
    // value[s] = best profit from hour h to the end, starting at grid[s]
    std::vector<double> value(G, neg_inf), next_value(G);
    std::vector<std::vector<int>> choice(H, std::vector<int>(G, -1));

    for (int s = 0; s < G; ++s)
        value[s] = feasible_state(H, grid[s]) ? 0.0 : neg_inf;

    for (int h = H - 1; h >= 1; --h) {
        for (int s = 0; s < G; ++s) {
            next_value[s] = neg_inf;
            if (!feasible_state(h, grid[s])) continue;
            auto [up, lo] = interpolate(p.table, grid[s]);
            for (int s2 = 0; s2 < G; ++s2) {
                if (value[s2] == neg_inf) continue;
                const double e = (grid[s2] - grid[s]) * p.q;
                if (e > p.q * up + 1e-9 || e < p.q * lo - 1e-9) continue;
                const double em = std::fabs(e);
                const double eff = em < p.epsilon ? 0.0 : e;  // tiny moves are no-ops
                if (em < p.epsilon && s2 != s) continue;
                const double cand = stage_reward(h, eff) + value[s2];
                if (cand > next_value[s] + 1e-15) {
                    next_value[s] = cand;
                    choice[h][s] = s2;
                }
            }
        }
        value.swap(next_value);
    }

    // Hour 0 starts from the exact initial SOC, which need not be on-grid.
    const double s0 = p.e_init / p.q;
    auto [up0, lo0] = interpolate(p.table, s0);
    double best = neg_inf;
    int best_s = -1;
    for (int s2 = 0; s2 < G; ++s2) {
        if (value[s2] == neg_inf) continue;
        const double e = (grid[s2] - s0) * p.q;
        if (e > p.q * up0 + 1e-9 || e < p.q * lo0 - 1e-9) continue;
        const double em = std::fabs(e);
        if (em > 0 && em < p.epsilon) continue;
        const double cand = stage_reward(0, e) + value[s2];
        if (cand > best + 1e-15) {
            best = cand;
            best_s = s2;
        }
    }
    require(best != neg_inf, ErrorKind::Data,
            "dp_schedule: no feasible trajectory (check availability bounds)");

    DpResult out;
    out.profit = best;
    out.schedule.date = p.date;
    out.schedule.energy_wh.resize(H);
    int s_idx = best_s;
    out.schedule.energy_wh[0] = (grid[s_idx] - s0) * p.q;
    for (int h = 1; h < H; ++h) {
        const int nxt = choice[h][s_idx];
        require(nxt >= 0, ErrorKind::Invariant, "dp_schedule: broken backtrack");
        double e = (grid[nxt] - grid[s_idx]) * p.q;
        if (std::fabs(e) < p.epsilon) e = 0.0;
        out.schedule.energy_wh[h] = e;
        s_idx = nxt;
    }
    return out;
}

}  // namespace arb

#endif
