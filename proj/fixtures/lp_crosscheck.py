#!/usr/bin/env python3
"""Independent MILP cross-check for the exported LP fixtures.

Parses the LP files emitted by `mdflow export-lp`, solves each model with the
HiGHS solver behind scipy.optimize.milp, and compares the objective against
fixtures/lp_expected.json (tolerance 1e-6). Also writes a `<name>.sol` file
with one "variable value" pair per line, readable by the bundled solution
reader.

Usage:
    python3 fixtures/lp_crosscheck.py [lp files...]

With no arguments, checks every entry in lp_expected.json, exporting the LP
next to this script via the `mdflow` binary if available under ./build.
"""

import json
import pathlib
import re
import subprocess
import sys

import numpy as np
from scipy.optimize import LinearConstraint, milp

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent

TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][\w]*)")


def parse_linear(expr):
    coeffs = {}
    for sign, coef, var in TERM.findall(expr):
        value = float(coef) if coef else 1.0
        if sign == "-":
            value = -value
        coeffs[var] = coeffs.get(var, 0.0) + value
    return coeffs


def parse_lp(text):
    objective, rows, binaries, bounds = {}, [], set(), {}
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("maximize", "minimize"):
            section = "obj"
            continue
        if lowered == "subject to":
            section = "rows"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered in ("binary", "binaries", "general"):
            section = "binary"
            continue
        if lowered == "end":
            break
        if section == "obj":
            expr = line.split(":", 1)[1] if ":" in line else line
            for var, coef in parse_linear(expr).items():
                objective[var] = objective.get(var, 0.0) + coef
        elif section == "rows":
            body = line.split(":", 1)[1] if ":" in line else line
            for op in ("<=", ">=", "="):
                if op in body:
                    lhs, rhs = body.split(op, 1)
                    rows.append((parse_linear(lhs), op, float(rhs)))
                    break
        elif section == "bounds":
            if ">=" in line:
                var, lo = line.split(">=", 1)
                bounds[var.strip()] = (float(lo), np.inf)
        elif section == "binary":
            binaries.add(line)
    return objective, rows, binaries, bounds


def solve_lp(path):
    objective, rows, binaries, bounds = parse_lp(path.read_text())
    variables = sorted(
        set(objective) | binaries | set(bounds)
        | {v for row, _, _ in rows for v in row}
    )
    index = {v: i for i, v in enumerate(variables)}
    c = np.zeros(len(variables))
    for var, coef in objective.items():
        c[index[var]] = -coef  # milp minimizes

    a, lo, hi = [], [], []
    for coeffs, op, rhs in rows:
        row = np.zeros(len(variables))
        for var, coef in coeffs.items():
            row[index[var]] = coef
        a.append(row)
        lo.append(rhs if op in ("=", ">=") else -np.inf)
        hi.append(rhs if op in ("=", "<=") else np.inf)

    integrality = np.array([1 if v in binaries else 0 for v in variables])
    lower = np.array([0.0] * len(variables))
    upper = np.array([1.0 if v in binaries else np.inf for v in variables])

    from scipy.optimize import Bounds

    res = milp(
        c,
        constraints=LinearConstraint(np.array(a), np.array(lo), np.array(hi)),
        integrality=integrality,
        bounds=Bounds(lower, upper),
    )
    if not res.success:
        raise RuntimeError(f"{path.name}: solver failed: {res.message}")
    assignment = {v: res.x[index[v]] for v in variables}
    return -res.fun, assignment


def main(argv):
    expected = json.loads((HERE / "lp_expected.json").read_text())
    if argv:
        targets = [pathlib.Path(a) for a in argv]
    else:
        mdflow = ROOT / "build" / "tools" / "mdflow"
        targets = []
        for name in expected:
            lp = HERE / name
            graph = HERE / (name[: -len(".lp")] + ".json")
            if mdflow.exists():
                subprocess.run(
                    [str(mdflow), "export-lp", "--graph", str(graph), "--out", str(lp)],
                    check=True,
                    stdout=subprocess.DEVNULL,
                )
            targets.append(lp)

    failures = 0
    for lp in targets:
        objective, assignment = solve_lp(lp)
        sol = lp.with_suffix(".sol")
        with open(sol, "w") as out:
            for var, value in sorted(assignment.items()):
                out.write(f"{var} {value:.12g}\n")
        want = expected.get(lp.name)
        if want is None:
            print(f"{lp.name}: objective {objective:.9f} (no expected value)")
            continue
        ok = abs(objective - want) <= 1e-6
        failures += 0 if ok else 1
        status = "OK" if ok else "MISMATCH"
        print(f"{lp.name}: external objective {objective:.9f}, expected {want} [{status}]")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
