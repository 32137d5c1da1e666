"""Brute-force cross-check of a diagram against direct root finding.

For each parameter value on a grid the polynomial ``f + lam*g`` is
instantiated with ``lam`` as an exact rational and all of its real roots are
isolated.  Stability comes straight from the certified bracket of each simple
root: the polynomial increases through the root exactly when it is positive at
the upper end of the bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import DEGENERATE, STABLE, UNSTABLE, Diagram
from .errors import DegenerateColumnError
from .expr import ParamAffineSystem
from .poly import ROOT_TOL, real_roots

__all__ = ["OracleColumn", "ComparisonReport", "oracle_equilibria", "default_grid", "compare"]

EXEMPT_RADIUS = 1e-3
MATCH_RADIUS = 1e-4


@dataclass(frozen=True)
class OracleColumn:
    lam: float
    # (x, multiplicity, label), ascending in x
    equilibria: tuple[tuple[float, int, str], ...]

    @property
    def xs(self) -> list[float]:
        return [e[0] for e in self.equilibria]


def _label(p, root) -> str:
    if root.multiplicity > 1:
        return DEGENERATE
    if root.lo == root.hi:
        s = p.derivative()(root.lo)
    else:
        s = p(root.hi)
    if s > 0:
        return UNSTABLE
    if s < 0:
        return STABLE
    return DEGENERATE


def oracle_equilibria(system: ParamAffineSystem, lam, tol: float = ROOT_TOL) -> OracleColumn:
    """Every real equilibrium at parameter ``lam``, labelled by its crossing direction.

    >>> from bifurcus.expr import parse_system
    >>> oracle_equilibria(parse_system("lambda*x - x^3"), 4).equilibria
    ((-2.0, 1, 'stable'), (0.0, 1, 'unstable'), (2.0, 1, 'stable'))
    """
    exact = Fraction(lam)
    p = system.instantiate(exact)
    if p.is_zero():
        raise DegenerateColumnError(
            f"f + {system.param}*g vanishes identically at {system.param} = {float(lam)!r}"
        )
    if p.is_constant():
        return OracleColumn(float(lam), ())
    roots = real_roots(p, tol)
    return OracleColumn(float(lam), tuple((r.value, r.multiplicity, _label(p, r)) for r in roots))


def default_grid(diagram: Diagram, n: int = 1000, cluster: int = 10,
                 radius: float = 1e-2) -> np.ndarray:
    """Uniform grid over the parameter window plus points packed around each bifurcation."""
    lo, hi = diagram.param_window
    parts = [np.linspace(lo, hi, n)]
    for b in diagram.bifurcations:
        pts = b.param + np.linspace(-radius, radius, cluster)
        parts.append(pts[(pts >= lo) & (pts <= hi)])
    return np.unique(np.concatenate(parts))


@dataclass
class ComparisonReport:
    grid: list[float]
    # per column: (diagram -> oracle, oracle -> diagram)
    distances: list[tuple[float, float]]
    exempt: list[bool]
    max_hausdorff: float
    max_hausdorff_checked: float
    worst_lambda: float | None
    stability_mismatches: int
    missing: int
    extra: int
    tolerance: float
    mismatch_details: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_hausdorff_checked < self.tolerance and self.stability_mismatches == 0


def _one_sided(a, b, empty: float) -> float:
    if not a:
        return 0.0
    if not b:
        return empty
    bb = np.asarray(b)
    return float(max(np.min(np.abs(bb - x)) for x in a))


def compare(diagram: Diagram, grid=None, tol: float = 1e-4,
            match_radius: float = MATCH_RADIUS, exempt_radius: float = EXEMPT_RADIUS) -> ComparisonReport:
    """Column-wise Hausdorff distance and label agreement between diagram and oracle.

    A column with no equilibria on one side and some on the other is assigned
    the window height as its distance.  Columns within ``exempt_radius`` of a
    detected bifurcation are reported but excluded from the checked maximum
    and from the mismatch count.
    """
    if diagram.horizontal != "lambda":
        raise ValueError("compare expects a diagram in lambda coordinates")
    grid = default_grid(diagram) if grid is None else np.asarray(grid, dtype=float)
    xlo, xhi = diagram.x_window
    height = diagram.x_height
    radius = match_radius * height
    bif = np.array([b.param for b in diagram.bifurcations])
    cols = diagram.columns(grid, refine=False)

    distances, exempt = [], []
    worst, worst_lam, worst_checked = 0.0, None, 0.0
    mismatches, missing, extra = 0, 0, 0
    details = []
    for lam, col in zip(grid, cols):
        oc = oracle_equilibria(diagram.system, float(lam))
        ours = [e.x for e in col]
        theirs = [e for e in oc.equilibria if xlo <= e[0] <= xhi]
        txs = [e[0] for e in theirs]
        d1 = _one_sided(ours, txs, height)
        d2 = _one_sided(txs, ours, height)
        distances.append((d1, d2))
        near = bool(bif.size) and float(np.min(np.abs(bif - lam))) <= exempt_radius
        exempt.append(near)
        d = max(d1, d2)
        if d > worst:
            worst = d
        if not near and d > worst_checked:
            worst_checked, worst_lam = d, float(lam)
        if near:
            continue
        missing += sum(1 for x in txs if not ours or min(abs(y - x) for y in ours) > radius)
        extra += sum(1 for y in ours if not txs or min(abs(y - x) for x in txs) > radius)
        for e in col:
            if e.stability is None or not txs:
                continue
            j = int(np.argmin([abs(x - e.x) for x in txs]))
            x, _, label = theirs[j]
            if abs(x - e.x) > radius or label == DEGENERATE:
                continue
            if e.stability != label:
                mismatches += 1
                details.append({"lambda": float(lam), "x": x, "branch": e.source,
                                "diagram": e.stability, "oracle": label})
    return ComparisonReport(
        grid=[float(g) for g in grid],
        distances=distances,
        exempt=exempt,
        max_hausdorff=worst,
        max_hausdorff_checked=worst_checked,
        worst_lambda=worst_lam,
        stability_mismatches=mismatches,
        missing=missing,
        extra=extra,
        tolerance=tol,
        mismatch_details=details,
    )
