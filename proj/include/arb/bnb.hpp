#ifndef ARB_BNB_HPP
#define ARB_BNB_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "arb/milp.hpp"
#include "arb/simplex.hpp"

namespace arb {

namespace bnb_detail {

struct Node {
    double parent_bound;
    std::int64_t id;
    std::vector<std::pair<int, int>> fixings;  // (binary var, 0 or 1)
};

struct NodeOrder {
    // Best-bound first; ties go to the most recently created node.
    bool operator()(const Node& a, const Node& b) const {
        if (a.parent_bound != b.parent_bound) return a.parent_bound > b.parent_bound;
        return a.id < b.id;
    }
};

inline bool assignment_feasible(const MilpInstance& inst,
                                const std::vector<double>& x, double tol) {
    for (const auto& c : inst.cons) {
        double act = 0.0;
        double scale = 1.0;
        for (auto [j, a] : c.coef) {
            act += a * x[j];
            scale = std::max(scale, std::fabs(a * x[j]));
        }
        const double t = tol * scale;
        switch (c.rel) {
            case Relation::LE: if (act > c.rhs + t) return false; break;
            case Relation::GE: if (act < c.rhs - t) return false; break;
            case Relation::EQ: if (std::fabs(act - c.rhs) > t) return false; break;
        }
    }
    return true;
}

// Multiple LP optima are common here: binaries that carry no objective cost
// (interval selectors, activity flags with zero fixed cost) may come back
// fractional. Snapping them to the nearest feasible integer turns many LP
// optima directly into incumbents. Returns true if all binaries end integral
// and the point stays feasible.
inline bool snap_binaries(const MilpInstance& inst,
                          const std::vector<double>& lb,
                          const std::vector<double>& ub,
                          std::vector<double>& x, double int_tol) {
    const int n = inst.num_vars();
    for (int j = 0; j < n; ++j) {
        if (inst.vars[j].type != VarType::Binary) continue;
        const double v = x[j];
        const double r = std::round(v);
        if (std::fabs(v - r) <= int_tol) { x[j] = r; continue; }
        // Try both directions, nearest first.
        const double first = v >= 0.5 ? 1.0 : 0.0;
        bool ok = false;
        for (double cand : {first, 1.0 - first}) {
            if (cand < lb[j] - 1e-9 || cand > ub[j] + 1e-9) continue;
            const double save = x[j];
            x[j] = cand;
            if (assignment_feasible(inst, x, 1e-7)) { ok = true; break; }
            x[j] = save;
        }
        if (!ok) return false;
    }
    return true;
}

}  // namespace bnb_detail

// Branch and bound over the bounded-variable simplex. Best-bound node
// selection; branches on the most fractional binary, preferring hour-level
// activity/direction binaries (marked by name prefix "y_"/"z_") over the
// interval selectors. Deterministic for a fixed instance and options.
inline Solution solve(const MilpInstance& inst, const SolverOptions& opts = {}) {
    using namespace bnb_detail;
    inst.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int n = inst.num_vars();

    std::vector<int> binaries;
    std::vector<bool> priority(n, false);  // branch-first class
    for (int j = 0; j < n; ++j)
        if (inst.vars[j].type == VarType::Binary) {
            binaries.push_back(j);
            const std::string& nm = inst.vars[j].name;
            priority[j] = nm.rfind("y_", 0) == 0 || nm.rfind("z_", 0) == 0;
        }

    std::vector<double> root_lb(n), root_ub(n);
    for (int j = 0; j < n; ++j) {
        root_lb[j] = inst.vars[j].lb;
        root_ub[j] = inst.vars[j].ub;
    }

    Solution best;
    best.status = SolveStatus::Infeasible;
    best.objective = kInf;
    bool have_incumbent = false;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::int64_t next_id = 0;
    open.push({-kInf, next_id++, {}});

    Solution result;
    result.bound = -kInf;
    std::int64_t nodes = 0;
    std::int64_t iters = 0;
    bool limit_hit = false;

    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };
    auto rel_gap = [&](double incumbent, double bound) {
        return (incumbent - bound) / std::max(1.0, std::fabs(incumbent));
    };

    std::vector<double> lb(n), ub(n);
    while (!open.empty()) {
        if (have_incumbent &&
            rel_gap(best.objective, open.top().parent_bound) <= opts.rel_gap_tol) {
            result.bound = open.top().parent_bound;
            break;
        }
        if (nodes >= opts.node_limit || elapsed() > opts.time_limit_s) {
            limit_hit = true;
            result.bound = open.top().parent_bound;
            break;
        }
        Node node = open.top();
        open.pop();
        ++nodes;

        lb = root_lb;
        ub = root_ub;
        for (auto [j, v] : node.fixings) { lb[j] = v; ub[j] = v; }

        Solution rel = solve_lp_bounded(inst, lb, ub, opts);
        iters += rel.stats.simplex_iterations;
        if (rel.status == SolveStatus::Infeasible) continue;
        if (rel.status == SolveStatus::Unbounded) {
            if (node.fixings.empty()) {
                result.status = SolveStatus::Unbounded;
                result.stats = {nodes, iters, elapsed()};
                return result;
            }
            continue;
        }
        if (have_incumbent &&
            rel_gap(best.objective, rel.objective) <= opts.rel_gap_tol)
            continue;  // pruned by bound

        // Fractional binaries at the LP optimum.
        int branch_var = -1;
        bool branch_var_priority = false;
        double branch_frac = -1.0;
        for (int j : binaries) {
            const double v = rel.values[j];
            const double frac = std::fabs(v - std::round(v));
            if (frac <= opts.integrality_tol) continue;
            const double score = 0.5 - std::fabs(v - 0.5);  // high = more fractional
            if (branch_var < 0 || (priority[j] && !branch_var_priority) ||
                (priority[j] == branch_var_priority && score > branch_frac + 1e-12)) {
                branch_var = j;
                branch_var_priority = priority[j];
                branch_frac = score;
            }
        }

        if (branch_var < 0) {
            // Integral; round off tolerance dust and accept.
            for (int j : binaries) rel.values[j] = std::round(rel.values[j]);
            if (!have_incumbent || rel.objective < best.objective) {
                best = rel;
                have_incumbent = true;
            }
            continue;
        }

        // Incumbent attempt by snapping cost-free fractional binaries.
        {
            std::vector<double> snapped = rel.values;
            if (snap_binaries(inst, lb, ub, snapped, opts.integrality_tol)) {
                double obj = 0.0;
                for (int j = 0; j < n; ++j) obj += inst.objective[j] * snapped[j];
                if (!have_incumbent || obj < best.objective) {
                    best.status = SolveStatus::Optimal;
                    best.values = snapped;
                    best.objective = obj;
                    have_incumbent = true;
                }
            }
        }
        if (have_incumbent &&
            rel_gap(best.objective, rel.objective) <= opts.rel_gap_tol)
            continue;

        for (int v : {0, 1}) {
            Node child{rel.objective, next_id++, node.fixings};
            child.fixings.push_back({branch_var, v});
            open.push(std::move(child));
        }
    }

    if (!limit_hit && open.empty()) result.bound = have_incumbent ? best.objective : kInf;

    if (!have_incumbent) {
        result.status = limit_hit ? SolveStatus::LimitReached : SolveStatus::Infeasible;
        result.stats = {nodes, iters, elapsed()};
        return result;
    }
    result = best;
    result.bound = std::min(limit_hit || !open.empty()
                                ? (open.empty() ? best.objective : open.top().parent_bound)
                                : best.objective,
                            best.objective);
    result.gap = rel_gap(result.objective, result.bound);
    result.status = limit_hit && result.gap > opts.rel_gap_tol
                        ? SolveStatus::LimitReached
                        : SolveStatus::Optimal;
    result.stats = {nodes, iters, elapsed()};
    return result;
}

}  // namespace arb

#endif
