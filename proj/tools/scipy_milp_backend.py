#!/usr/bin/env python3
"""MILP backend using scipy.optimize.milp (HiGHS).

Usage: scipy_milp_backend.py <instance.mps> <solution.out>

Reads the MPS subset written by the C++ exporter and writes the solution
file format expected by the backend adapter:
    status <optimal|infeasible|unbounded|limit-reached>
    objective <value>
    <variable> <value>
"""
import sys

import numpy as np
from scipy.optimize import LinearConstraint, Bounds, milp

INF = float("inf")


def parse_mps(path):
    var_names, var_idx = [], {}
    lb, ub, integrality, obj = [], [], [], []
    rows = []  # (name, rel)
    row_idx = {}
    row_coefs = {}  # name -> list[(var, coef)]
    rhs = {}
    obj_row = None
    section = None
    in_int = False

    def var(name):
        if name not in var_idx:
            var_idx[name] = len(var_names)
            var_names.append(name)
            lb.append(0.0)
            ub.append(1.0 if in_int else INF)
            integrality.append(1 if in_int else 0)
            obj.append(0.0)
        return var_idx[name]

    with open(path) as f:
        for line in f:
            if not line.strip() or line.startswith("*"):
                continue
            toks = line.split()
            if not line[0].isspace():
                if toks[0] in ("ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES"):
                    section = toks[0]
                elif toks[0] in ("NAME", "ENDATA"):
                    section = None
                continue
            if section == "ROWS":
                kind, name = toks
                if kind == "N":
                    if obj_row is None:
                        obj_row = name
                else:
                    row_idx[name] = len(rows)
                    rows.append((name, kind))
                    row_coefs[name] = []
            elif section == "COLUMNS":
                if len(toks) >= 3 and toks[1] == "'MARKER'":
                    in_int = toks[2] == "'INTORG'"
                    continue
                j = var(toks[0])
                for i in range(1, len(toks) - 1, 2):
                    a = float(toks[i + 1])
                    if toks[i] == obj_row:
                        obj[j] = a
                    else:
                        row_coefs[toks[i]].append((j, a))
            elif section == "RHS":
                for i in range(1, len(toks) - 1, 2):
                    if toks[i] != obj_row:
                        rhs[toks[i]] = float(toks[i + 1])
            elif section == "BOUNDS":
                kind = toks[0]
                j = var(toks[2])
                if kind == "BV":
                    integrality[j] = 1
                    lb[j], ub[j] = 0.0, 1.0
                elif kind == "FR":
                    lb[j], ub[j] = -INF, INF
                elif kind == "MI":
                    lb[j] = -INF
                elif kind == "PL":
                    ub[j] = INF
                elif kind == "UP":
                    ub[j] = float(toks[3])
                elif kind == "LO":
                    lb[j] = float(toks[3])
                elif kind == "FX":
                    lb[j] = ub[j] = float(toks[3])
            elif section == "RANGES":
                raise ValueError("RANGES not supported")

    n = len(var_names)
    A = np.zeros((len(rows), n))
    cl = np.empty(len(rows))
    cu = np.empty(len(rows))
    for i, (name, kind) in enumerate(rows):
        for j, a in row_coefs[name]:
            A[i, j] += a
        b = rhs.get(name, 0.0)
        cl[i] = b if kind in ("E", "G") else -INF
        cu[i] = b if kind in ("E", "L") else INF
    return (var_names, np.array(obj), np.array(lb), np.array(ub),
            np.array(integrality), A, cl, cu)


def main():
    if len(sys.argv) != 3:
        sys.exit("usage: scipy_milp_backend.py <instance.mps> <solution.out>")
    names, c, lb, ub, integrality, A, cl, cu = parse_mps(sys.argv[1])
    constraints = [LinearConstraint(A, cl, cu)] if A.size else []
    res = milp(c=c, constraints=constraints, bounds=Bounds(lb, ub),
               integrality=integrality,
               options={"mip_rel_gap": 1e-9, "presolve": True})
    with open(sys.argv[2], "w") as out:
        if res.status == 0:
            out.write("status optimal\n")
            out.write(f"objective {res.fun:.17g}\n")
            for name, v in zip(names, res.x):
                out.write(f"{name} {v:.17g}\n")
        elif res.status == 2:
            out.write("status infeasible\n")
        elif res.status == 3:
            out.write("status unbounded\n")
        else:
            out.write("status limit-reached\n")


if __name__ == "__main__":
    main()
