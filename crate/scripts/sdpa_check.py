#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) file with an interior-point solver via cvxpy.

Prints the SDPA optimal value (max F0.Y s.t. Fi.Y = ci, Y psd) on stdout.
Exit code 3 means no usable solver is installed.
"""
import re
import sys


def read_sdpa(text):
    lines = [l for l in text.splitlines() if l.strip() and l.lstrip()[0] not in '"*']
    tok = lambda l: [t for t in re.split(r"[\s{}(),]+", l) if t]
    m = int(tok(lines[0])[0])
    nblocks = int(tok(lines[1])[0])
    blocks = [int(v) for v in tok(lines[2])[:nblocks]]
    c = [float(v) for v in tok(lines[3])[:m]]
    entries = []
    for l in lines[4:]:
        t = tok(l)
        entries.append((int(t[0]), int(t[1]), int(t[2]), int(t[3]), float(t[4])))
    return m, blocks, c, entries


def main(path):
    try:
        import cvxpy as cp
        import numpy as np
        import scipy.sparse as sp
    except ImportError:
        return 3
    installed = cp.installed_solvers()
    solver = next((s for s in ("CLARABEL", "MOSEK", "CVXOPT") if s in installed), None)
    if solver is None:
        return 3

    m, blocks, c, entries = read_sdpa(open(path).read())
    vars_ = []
    for b in blocks:
        vars_.append(cp.Variable(-b, nonneg=True) if b < 0 else cp.Variable((b, b), symmetric=True))
    data = {}
    for mat, blk, i, j, v in entries:
        data.setdefault((mat, blk), []).append((i - 1, j - 1, v))

    def inner(mat):
        terms = []
        for blk, b in enumerate(blocks, start=1):
            items = data.get((mat, blk))
            if not items:
                continue
            x = vars_[blk - 1]
            if b < 0:
                coef = np.zeros(-b)
                for i, _, v in items:
                    coef[i] += v
                terms.append(coef @ x)
            else:
                rows, cols, vals = [], [], []
                for i, j, v in items:
                    rows.append(i); cols.append(j); vals.append(v)
                    if i != j:
                        rows.append(j); cols.append(i); vals.append(v)
                f = sp.coo_matrix((vals, (rows, cols)), shape=(b, b)).tocsr()
                terms.append(cp.sum(cp.multiply(f, x)))
        return cp.sum(cp.hstack(terms)) if terms else 0

    constraints = [x >> 0 for x, b in zip(vars_, blocks) if b > 0]
    constraints += [inner(k) == c[k - 1] for k in range(1, m + 1)]
    prob = cp.Problem(cp.Maximize(inner(0)), constraints)
    prob.solve(solver=solver)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        print(f"status {prob.status}", file=sys.stderr)
        return 1
    print(f"{prob.value:.12g} {solver}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
