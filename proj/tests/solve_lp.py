#!/usr/bin/env python3
"""Solve a CPLEX-LP file with scipy's HiGHS MILP backend.

Prints `objective <value>` followed by one `<name> <value>` line per
variable, which the C++ side reads back with its .sol parser.
"""
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

FLOAT = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def tokenize(text):
    out = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0]
        line = re.sub(r"(<=|>=|=|\+)", r" \1 ", line)
        # a '-' is a separate token (names in this dialect never contain one)
        line = re.sub(r"-", " - ", line)
        # undo splits inside scientific-notation exponents
        line = re.sub(r"(?<=[eE]) - (?=\d)", "-", line)
        line = re.sub(r"(?<=[eE]) \+ (?=\d)", "+", line)
        out.extend(line.split())
    return out


def parse(tokens):
    sections = {"minimize", "maximize", "subject", "bounds", "binaries", "binary",
                "generals", "general", "end"}
    i, n = 0, len(tokens)
    mode = None
    sense = 1
    objective = []  # (coef, var) pairs; var None for constants
    constraints = []  # (terms, op, rhs)
    var_bounds = {}
    binaries = set()

    def parse_expr(stop):
        nonlocal i
        terms = []
        sign = 1.0
        coef = None
        while i < n:
            t = tokens[i]
            low = t.lower()
            if low in stop or low in sections:
                break
            if t.endswith(":"):  # next row's label
                break
            if t == "+":
                i += 1
                continue
            if t == "-":
                sign = -sign
                i += 1
                continue
            if FLOAT.match(t):
                if coef is None:
                    coef = sign * float(t)
                else:  # two numbers in a row: previous was a constant term
                    terms.append((coef, None))
                    coef = sign * float(t)
                sign = 1.0
                i += 1
                continue
            # variable name
            value = coef if coef is not None else sign
            terms.append((value, t))
            coef = None
            sign = 1.0
            i += 1
        if coef is not None:
            terms.append((coef, None))
        return terms

    while i < n:
        t = tokens[i]
        low = t.lower()
        if low in ("minimize", "maximize"):
            sense = 1 if low == "minimize" else -1
            mode = "obj"
            i += 1
            if i < n and tokens[i].endswith(":"):
                i += 1
            elif i + 1 < n and tokens[i + 1] == ":":
                i += 2
            objective = parse_expr({"subject"})
            continue
        if low == "subject":
            i += 2  # subject to
            mode = "st"
            continue
        if low == "bounds":
            mode = "bounds"
            i += 1
            continue
        if low in ("binaries", "binary"):
            mode = "bin"
            i += 1
            continue
        if low == "end":
            break
        if mode == "st":
            if t.endswith(":"):
                i += 1
            elif i + 1 < n and tokens[i + 1] == ":":
                i += 2
            terms = parse_expr({"<=", ">=", "="})
            op = tokens[i]
            i += 1
            rhs_terms = parse_expr(set())
            rhs = sum(c for c, v in rhs_terms if v is None)
            constraints.append((terms, op, rhs))
            continue
        if mode == "bounds":
            # forms: v = c | c <= v <= c | v <= c | v >= c
            if i + 2 < n and tokens[i + 1] in ("=", "<=", ">="):
                name, op, val = tokens[i], tokens[i + 1], float(tokens[i + 2])
                lo, hi = var_bounds.get(name, (0.0, np.inf))
                if op == "=":
                    lo = hi = val
                elif op == "<=":
                    hi = val
                else:
                    lo = val
                var_bounds[name] = (lo, hi)
                i += 3
                continue
            i += 1
            continue
        if mode == "bin":
            binaries.add(t)
            i += 1
            continue
        i += 1

    return sense, objective, constraints, var_bounds, binaries


def main():
    if len(sys.argv) != 2:
        print("usage: solve_lp.py model.lp", file=sys.stderr)
        return 2
    with open(sys.argv[1], encoding="utf-8") as fh:
        tokens = tokenize(fh.read())
    sense, objective, constraints, var_bounds, binaries = parse(tokens)

    names = []
    index = {}

    def vid(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for _, v in objective:
        if v is not None:
            vid(v)
    for terms, _, _ in constraints:
        for _, v in terms:
            if v is not None:
                vid(v)
    for v in binaries:
        vid(v)

    nvar = len(names)
    c = np.zeros(nvar)
    offset = 0.0
    for coef, v in objective:
        if v is None:
            offset += coef
        else:
            c[vid(v)] += coef
    c *= sense

    rows, lbs, ubs = [], [], []
    for terms, op, rhs in constraints:
        row = np.zeros(nvar)
        for coef, v in terms:
            if v is None:
                rhs -= coef
            else:
                row[vid(v)] += coef
        rows.append(row)
        lbs.append(rhs if op in ("=", ">=") else -np.inf)
        ubs.append(rhs if op in ("=", "<=") else np.inf)

    lo = np.zeros(nvar)
    hi = np.full(nvar, np.inf)
    for v in binaries:
        hi[vid(v)] = 1.0
    for name, (l, h) in var_bounds.items():
        lo[vid(name)] = l
        hi[vid(name)] = h
    integrality = np.zeros(nvar)
    for v in binaries:
        integrality[vid(v)] = 1

    res = milp(c=c,
               constraints=LinearConstraint(np.vstack(rows), lbs, ubs) if rows else (),
               integrality=integrality, bounds=Bounds(lo, hi))
    if not res.success:
        print(f"solver failed: {res.message}", file=sys.stderr)
        return 1

    print(f"objective {sense * res.fun + offset:.12g}")
    for name in names:
        print(f"{name} {res.x[index[name]]:.12g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
