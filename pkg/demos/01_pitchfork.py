"""The supercritical pitchfork x' = lambda*x - x^3, built step by step.

Run from the repository root:

    python demos/01_pitchfork.py
"""

from pathlib import Path

from bifurcus import analyze, step_trace, to_svg
from bifurcus.locus import decompose, poles_zeros

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

dg = analyze("lambda*x - x^3")

# The common factor h(x) = x is pulled out first. It gives the constant
# branch x = 0. The rest of the equation is x^2 + mu = 0 with mu = -lambda.
d = decompose(dg.system)
print("h  =", d.h)
print("f1 =", d.f1)
print("g1 =", d.g1)
print("mu = -lambda" if d.mu_is_minus_lambda else "mu = lambda")

# x = 0 is a double pole and there are no zeros. The locus mu = -x^2 lies
# entirely at mu <= 0, so after the flip it lies at lambda >= 0.
pz = poles_zeros(d)
print("poles:", pz.poles.as_pairs(), " zeros:", pz.zeros.as_pairs())

for b in dg.branches:
    lo, hi = b.param_range
    print(f"{b.id}: lambda in [{lo:.3g}, {hi:.3g}], {len(b)} samples, {b.stability}")
for c in dg.constant_branches:
    print(c.id, [(round(s.lo, 3), round(s.hi, 3), s.stability) for s in c.segments])

for p in dg.bifurcations:
    print(f"{p.kind} at lambda={p.param:g}, x={p.x:g}")

# one vertical slice: three equilibria at lambda = 4
for e in sorted(dg.column(4.0), key=lambda e: e.x):
    print(f"  x = {e.x:+.10f}  {e.stability}")

(out / "pitchfork.svg").write_text(to_svg(dg))
(out / "pitchfork.md").write_text(step_trace(dg))
print("wrote", out / "pitchfork.svg")
