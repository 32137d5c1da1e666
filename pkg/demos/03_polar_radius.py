"""Radial equation r' = r*(lambda - lambda*r^2 + r^4), restricted to r >= 0.

The bracket is entered on its own and multiplied by r with multiply_state.
Only the upper half plane of the locus is kept.

    python demos/03_polar_radius.py
"""

from pathlib import Path

from bifurcus import AnalysisConfig, analyze, step_trace, to_svg

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

dg = analyze("lambda - lambda*r^2 + r^4", state="r", multiply_state=True,
             config=AnalysisConfig(domain_min=0.0))

print("f1 =", dg.decomposition.f1.to_text("r"), " g1 =", dg.decomposition.g1.to_text("r"))
print("poles", dg.poles_zeros.poles.as_pairs(), "zeros", dg.poles_zeros.zeros.values)
print("asymptotes kept after clipping:", dg.asymptotes.horizontal)
print("x window:", dg.x_window)

# at lambda = 5 there are three nonnegative radii
for e in sorted(dg.column(5.0), key=lambda e: e.x):
    print(f"  r = {e.x:.6f}  {e.stability}")

for p in dg.bifurcations:
    print(f"{p.kind} at lambda={p.param:.6g}, r={p.x:.6g}")

(out / "polar.svg").write_text(to_svg(dg))
(out / "polar.md").write_text(step_trace(dg))
