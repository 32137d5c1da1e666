"""Two members of x' = c + d*x - x^3 with d tied to c.

With d = 1 + 2c the locus has a single turning point. With d = 1 + 0.5c it
has two, and the diagram shows a hysteresis loop.

    python demos/02_cubic_family.py
"""

from pathlib import Path

import numpy as np

from bifurcus import analyze, to_svg
from bifurcus.locus import critical_polynomial
from bifurcus.poly import real_roots

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

for tag, expr in [("2a", "c + (1+2*c)*x - x^3"), ("2b", "c + (1+0.5*c)*x - x^3")]:
    dg = analyze(expr, param="c")
    d = dg.decomposition
    print(f"--- example {tag}: {expr}")
    print("poles", dg.poles_zeros.poles.values, "zeros", dg.poles_zeros.zeros.values)

    # sign of mu between consecutive poles and zeros, read off from the parity
    # of how many lie above
    for r in dg.sign_regions:
        print(f"  ({r.lo:g}, {r.hi:g}): {r.count_above} above, mu {'>' if r.mu_sign > 0 else '<'} 0")

    print("vertical asymptote:", dg.asymptotes.vertical, " horizontal:", dg.asymptotes.horizontal)

    # the turning points are the real roots of f1'*g1 - f1*g1'
    crit = critical_polynomial(d)
    print("critical polynomial:", crit, "->", [round(v, 6) for v in real_roots(crit).values])
    for p in dg.bifurcations:
        print(f"  {p.kind} at c={p.param:.6f}, x={p.x:.6f}")

    # count equilibria across the window
    cs = np.linspace(*dg.param_window, 9)
    print("  equilibria per column:", [len(col) for col in dg.columns(cs)])
    (out / f"cubic_{tag}.svg").write_text(to_svg(dg))
