#ifndef ARB_MILP_HPP
#define ARB_MILP_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "arb/error.hpp"

namespace arb {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };
enum class Relation { LE, EQ, GE };

struct Variable {
    std::string name;
    double lb = 0.0;
    double ub = kInf;
    VarType type = VarType::Continuous;
};

struct Constraint {
    std::vector<std::pair<int, double>> coef;  // (variable index, coefficient)
    Relation rel = Relation::LE;
    double rhs = 0.0;
    std::string name;
};

// Abstract minimization MILP. The objective is stored dense, one entry per
// variable.
struct MilpInstance {
    std::string name = "MILP";
    std::vector<Variable> vars;
    std::vector<Constraint> cons;
    std::vector<double> objective;

    int add_var(std::string name, double lb, double ub,
                VarType type = VarType::Continuous) {
        vars.push_back({std::move(name), lb, ub, type});
        objective.push_back(0.0);
        return static_cast<int>(vars.size()) - 1;
    }

    void add_con(std::vector<std::pair<int, double>> coef, Relation rel,
                 double rhs, std::string name = "") {
        if (name.empty()) name = "c" + std::to_string(cons.size());
        cons.push_back({std::move(coef), rel, rhs, std::move(name)});
    }

    int num_vars() const { return static_cast<int>(vars.size()); }
    int num_cons() const { return static_cast<int>(cons.size()); }

    int num_binaries() const {
        int n = 0;
        for (const auto& v : vars) n += v.type == VarType::Binary;
        return n;
    }

    void validate() const {
        for (const auto& v : vars) {
            require(v.lb <= v.ub, ErrorKind::Validation,
                    "inconsistent bounds on " + v.name);
            if (v.type == VarType::Binary)
                require(v.lb >= 0.0 && v.ub <= 1.0, ErrorKind::Validation,
                        "binary " + v.name + " with bounds outside [0,1]");
        }
        for (const auto& c : cons) {
            require(std::isfinite(c.rhs), ErrorKind::Validation,
                    "non-finite rhs in " + c.name);
            for (auto [j, a] : c.coef) {
                require(j >= 0 && j < num_vars(), ErrorKind::Validation,
                        "bad variable index in " + c.name);
                require(std::isfinite(a), ErrorKind::Validation,
                        "non-finite coefficient in " + c.name);
            }
        }
    }
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, LimitReached };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::LimitReached: return "limit-reached";
    }
    return "?";
}

struct SolveStats {
    std::int64_t nodes = 0;
    std::int64_t simplex_iterations = 0;
    double wall_seconds = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> values;
    double objective = kInf;
    double bound = -kInf;  // best dual bound (minimization)
    double gap = kInf;     // (objective - bound) / max(1, |objective|)
    SolveStats stats;
};

struct SolverOptions {
    double integrality_tol = 1e-6;
    double rel_gap_tol = 1e-6;
    double feas_tol = 1e-7;
    std::int64_t node_limit = 2'000'000;
    std::int64_t iteration_limit = 200'000;  // per LP
    double time_limit_s = kInf;
};

}  // namespace arb

#endif
