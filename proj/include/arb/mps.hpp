#ifndef ARB_MPS_HPP
#define ARB_MPS_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "arb/error.hpp"
#include "arb/milp.hpp"

namespace arb {

namespace mps_detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) out.push_back(t);
    return out;
}

}  // namespace mps_detail

// Writes the instance as an MPS file (free-form token spacing, standard
// section order, INTORG/INTEND markers around binary columns). One
// coefficient per line keeps re-export byte-stable.
inline void export_mps(const MilpInstance& inst, const std::string& path) {
    using mps_detail::num;
    std::ofstream out(path);
    require(out.good(), ErrorKind::Data, "cannot write MPS file: " + path);

    out << "NAME          " << inst.name << "\n";
    out << "ROWS\n";
    out << " N  COST\n";
    for (const auto& c : inst.cons) {
        const char rel = c.rel == Relation::LE ? 'L' : c.rel == Relation::GE ? 'G' : 'E';
        out << " " << rel << "  " << c.name << "\n";
    }

    // Column-major coefficients, columns in variable order.
    std::vector<std::vector<std::pair<std::string, double>>> colrows(inst.num_vars());
    for (int j = 0; j < inst.num_vars(); ++j)
        if (inst.objective[j] != 0.0) colrows[j].push_back({"COST", inst.objective[j]});
    for (const auto& c : inst.cons)
        for (auto [j, a] : c.coef)
            if (a != 0.0) colrows[j].push_back({c.name, a});

    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (int j = 0; j < inst.num_vars(); ++j) {
        const bool want_int = inst.vars[j].type == VarType::Binary;
        if (want_int != in_int) {
            out << "    M" << marker++ << "        'MARKER'                 '"
                << (want_int ? "INTORG" : "INTEND") << "'\n";
            in_int = want_int;
        }
        for (auto& [row, a] : colrows[j])
            out << "    " << inst.vars[j].name << "  " << row << "  " << num(a) << "\n";
        if (colrows[j].empty())  // keep the column visible to importers
            out << "    " << inst.vars[j].name << "  COST  0\n";
    }
    if (in_int)
        out << "    M" << marker++ << "        'MARKER'                 '"
            << "INTEND" << "'\n";

    out << "RHS\n";
    for (const auto& c : inst.cons)
        if (c.rhs != 0.0)
            out << "    RHS  " << c.name << "  " << num(c.rhs) << "\n";

    out << "BOUNDS\n";
    for (const auto& v : inst.vars) {
        if (v.type == VarType::Binary && v.lb == 0.0 && v.ub == 1.0) {
            out << " BV BND  " << v.name << "\n";
            continue;
        }
        if (v.lb == -kInf && v.ub == kInf) {
            out << " FR BND  " << v.name << "\n";
            continue;
        }
        if (v.lb == v.ub) {
            out << " FX BND  " << v.name << "  " << num(v.lb) << "\n";
            continue;
        }
        if (v.lb == -kInf) out << " MI BND  " << v.name << "\n";
        else if (v.lb != 0.0) out << " LO BND  " << v.name << "  " << num(v.lb) << "\n";
        if (v.ub != kInf) out << " UP BND  " << v.name << "  " << num(v.ub) << "\n";
    }
    out << "ENDATA\n";
    require(out.good(), ErrorKind::Data, "write failed: " + path);
}

// Parses the subset of MPS emitted by export_mps (plus common variations:
// objective row under any N name, multiple pairs per COLUMNS/RHS line).
inline MilpInstance import_mps(const std::string& path) {
    using mps_detail::tokens;
    std::ifstream in(path);
    require(in.good(), ErrorKind::Data, "cannot open MPS file: " + path);

    MilpInstance inst;
    std::map<std::string, int> row_of;   // constraint name -> index
    std::map<std::string, int> var_of;
    std::string obj_row;
    enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds } sec = Section::None;
    bool in_int = false;
    std::string line;

    auto var_index = [&](const std::string& name) {
        auto it = var_of.find(name);
        if (it != var_of.end()) return it->second;
        const int j = inst.add_var(name, 0.0, kInf,
                                   in_int ? VarType::Binary : VarType::Continuous);
        if (in_int) inst.vars[j].ub = 1.0;
        var_of[name] = j;
        return j;
    };

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        if (line[0] != ' ' && line[0] != '\t') {
            auto t = tokens(line);
            if (t[0] == "NAME") { if (t.size() > 1) inst.name = t[1]; continue; }
            if (t[0] == "ROWS") { sec = Section::Rows; continue; }
            if (t[0] == "COLUMNS") { sec = Section::Columns; continue; }
            if (t[0] == "RHS") { sec = Section::Rhs; continue; }
            if (t[0] == "RANGES") { sec = Section::Ranges; continue; }
            if (t[0] == "BOUNDS") { sec = Section::Bounds; continue; }
            if (t[0] == "ENDATA") break;
            throw ArbError(ErrorKind::Data, "unknown MPS section: " + t[0]);
        }
        auto t = tokens(line);
        if (t.empty()) continue;
        switch (sec) {
            case Section::Rows: {
                require(t.size() == 2, ErrorKind::Data, "bad ROWS line: " + line);
                if (t[0] == "N") {
                    if (obj_row.empty()) obj_row = t[1];
                    break;
                }
                Relation rel = t[0] == "L"   ? Relation::LE
                               : t[0] == "G" ? Relation::GE
                                             : Relation::EQ;
                require(t[0] == "L" || t[0] == "G" || t[0] == "E", ErrorKind::Data,
                        "bad row type: " + t[0]);
                row_of[t[1]] = inst.num_cons();
                inst.add_con({}, rel, 0.0, t[1]);
                break;
            }
            case Section::Columns: {
                if (t.size() >= 3 && t[1] == "'MARKER'") {
                    in_int = t[2] == "'INTORG'";
                    break;
                }
                require(t.size() >= 3 && t.size() % 2 == 1, ErrorKind::Data,
                        "bad COLUMNS line: " + line);
                const int j = var_index(t[0]);
                for (size_t i = 1; i + 1 < t.size(); i += 2) {
                    const double a = std::stod(t[i + 1]);
                    if (t[i] == obj_row) inst.objective[j] = a;
                    else {
                        auto it = row_of.find(t[i]);
                        require(it != row_of.end(), ErrorKind::Data,
                                "unknown row in COLUMNS: " + t[i]);
                        if (a != 0.0) inst.cons[it->second].coef.push_back({j, a});
                    }
                }
                break;
            }
            case Section::Rhs: {
                require(t.size() >= 3 && t.size() % 2 == 1, ErrorKind::Data,
                        "bad RHS line: " + line);
                for (size_t i = 1; i + 1 < t.size(); i += 2) {
                    if (t[i] == obj_row) continue;  // objective offset unsupported
                    auto it = row_of.find(t[i]);
                    require(it != row_of.end(), ErrorKind::Data,
                            "unknown row in RHS: " + t[i]);
                    inst.cons[it->second].rhs = std::stod(t[i + 1]);
                }
                break;
            }
            case Section::Ranges:
                throw ArbError(ErrorKind::Data, "RANGES section not supported");
            case Section::Bounds: {
                require(t.size() >= 3, ErrorKind::Data, "bad BOUNDS line: " + line);
                const std::string& kind = t[0];
                const int j = var_index(t[2]);
                Variable& v = inst.vars[j];
                if (kind == "BV") { v.type = VarType::Binary; v.lb = 0; v.ub = 1; }
                else if (kind == "FR") { v.lb = -kInf; v.ub = kInf; }
                else if (kind == "MI") { v.lb = -kInf; }
                else if (kind == "PL") { v.ub = kInf; }
                else {
                    require(t.size() >= 4, ErrorKind::Data, "bound needs a value: " + line);
                    const double val = std::stod(t[3]);
                    if (kind == "UP") v.ub = val;
                    else if (kind == "LO") v.lb = val;
                    else if (kind == "FX") v.lb = v.ub = val;
                    else throw ArbError(ErrorKind::Data, "unknown bound type: " + kind);
                }
                break;
            }
            case Section::None:
                throw ArbError(ErrorKind::Data, "data before first section");
        }
    }
    require(!obj_row.empty(), ErrorKind::Data, "MPS file has no objective row");
    inst.validate();
    return inst;
}

}  // namespace arb

#endif
