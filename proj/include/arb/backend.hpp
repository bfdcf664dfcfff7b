#ifndef ARB_BACKEND_HPP
#define ARB_BACKEND_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "arb/error.hpp"
#include "arb/milp.hpp"
#include "arb/mps.hpp"

namespace arb {

// External solver adapter. The backend is any executable invoked as
//   <command> <instance.mps> <solution.out>
// that writes a solution file of the form
//   status <optimal|infeasible|unbounded|limit-reached>
//   objective <value>
//   <variable name> <value>        (one line per variable)
struct BackendConfig {
    std::string command;
    std::string work_dir = ".";
};

inline Solution solve_via_backend(const MilpInstance& inst,
                                  const BackendConfig& backend) {
    require(!backend.command.empty(), ErrorKind::Validation,
            "backend command not configured");
    const std::string mps_path = backend.work_dir + "/" + inst.name + ".mps";
    const std::string sol_path = backend.work_dir + "/" + inst.name + ".sol";
    export_mps(inst, mps_path);
    std::remove(sol_path.c_str());

    const std::string cmd =
        backend.command + " \"" + mps_path + "\" \"" + sol_path + "\"";
    const int rc = std::system(cmd.c_str());
    require(rc == 0, ErrorKind::Solver,
            "backend exited with code " + std::to_string(rc) + ": " + cmd);

    std::ifstream in(sol_path);
    require(in.good(), ErrorKind::Solver,
            "backend produced no solution file: " + sol_path);

    Solution sol;
    std::string line;
    std::map<std::string, double> values;
    bool have_status = false, have_objective = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "status") {
            std::string s;
            ls >> s;
            if (s == "optimal") sol.status = SolveStatus::Optimal;
            else if (s == "feasible") sol.status = SolveStatus::Feasible;
            else if (s == "infeasible") sol.status = SolveStatus::Infeasible;
            else if (s == "unbounded") sol.status = SolveStatus::Unbounded;
            else if (s == "limit-reached") sol.status = SolveStatus::LimitReached;
            else throw ArbError(ErrorKind::Solver, "backend reported unknown status: " + s);
            have_status = true;
        } else if (key == "objective") {
            ls >> sol.objective;
            have_objective = true;
        } else {
            double v;
            require(static_cast<bool>(ls >> v), ErrorKind::Solver,
                    "unparseable backend solution line: '" + line + "'");
            values[key] = v;
        }
    }
    require(have_status, ErrorKind::Solver, "backend solution missing status line");

    if (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Feasible) {
        require(have_objective, ErrorKind::Solver,
                "backend solution missing objective line");
        sol.values.resize(inst.num_vars(), 0.0);
        for (int j = 0; j < inst.num_vars(); ++j) {
            auto it = values.find(inst.vars[j].name);
            require(it != values.end(), ErrorKind::Solver,
                    "backend solution missing variable " + inst.vars[j].name);
            sol.values[j] = it->second;
        }
        sol.bound = sol.objective;
        sol.gap = 0.0;
    }
    // Keep the exchange files only when something went wrong, so long runs
    // do not accumulate one MPS/solution pair per solved day.
    in.close();
    std::remove(mps_path.c_str());
    std::remove(sol_path.c_str());
    return sol;
}

}  // namespace arb

#endif
