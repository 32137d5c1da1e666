"""Check each fixture against brute-force root finding on a dense grid.

For every parameter value on the grid the polynomial f + lambda*g is solved
directly. Its real roots are compared with the diagram's vertical slice.

    python demos/04_oracle_check.py
"""

import time

from bifurcus import AnalysisConfig, analyze
from bifurcus.oracle import compare, default_grid

cases = [
    ("lambda*x - x^3", "x", "lambda", False, None),
    ("c + (1+2*c)*x - x^3", "x", "c", False, None),
    ("c + (1+0.5*c)*x - x^3", "x", "c", False, None),
    ("lambda - lambda*r^2 + r^4", "r", "lambda", True, 0.0),
]

t0 = time.perf_counter()
for expr, state, param, mult, dmin in cases:
    dg = analyze(expr, state, param, mult, AnalysisConfig(domain_min=dmin))
    rep = compare(dg, default_grid(dg, 1000))
    print(f"{expr:28s} columns={len(rep.grid):5d}  hausdorff={rep.max_hausdorff_checked:.2e}  "
          f"mismatches={rep.stability_mismatches}  {'ok' if rep.passed else 'FAIL'}")
print(f"total {time.perf_counter() - t0:.2f} s")

# a deliberately broken diagram is caught
from dataclasses import replace

dg = analyze("lambda*x - x^3")
bad = replace(dg, branches=[replace(dg.branches[0], x=dg.branches[0].x + 0.1), *dg.branches[1:]])
rep = compare(bad)
print(f"shifted branch: hausdorff={rep.max_hausdorff_checked:.3f} at lambda={rep.worst_lambda:.3f}")
