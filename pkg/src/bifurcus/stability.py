"""Stability labels and bifurcation points.

Two independent labelings are provided.  :func:`classify_by_alternation`
reads stability off the ordering of equilibria in each vertical column: above
the topmost equilibrium the vector field has a fixed sign, and it flips at
every equilibrium of odd multiplicity.  :func:`classify_by_derivative` uses
the sign of the linearisation.  They must agree on hyperbolic equilibria.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import replace
from fractions import Fraction

import numpy as np

from .diagram import (
    DEGENERATE,
    STABLE,
    UNSTABLE,
    BifurcationPoint,
    ConstantSegment,
    Decomposition,
    Diagram,
)
from .expr import ParamAffineSystem
from .locus import critical_polynomial
from .poly import CLUSTER_TOL, ROOT_TOL, Polynomial, RootSet, as_fraction, real_roots

__all__ = [
    "STABLE",
    "UNSTABLE",
    "DEGENERATE",
    "derivative_stability",
    "alternation_labels",
    "probe_point",
    "classify_by_alternation",
    "classify_by_derivative",
    "constant_segments",
    "detect_bifurcations",
    "local_multiplicity",
]

DEGENERATE_EPS = 1e-8
COLLISION_TOL = 1e-6
AMBIGUOUS_SHARE = 0.10


def derivative_stability(system: ParamAffineSystem, lam: float, x: float,
                         eps: float = DEGENERATE_EPS) -> str:
    """Label an equilibrium by the sign of ``d/dx [f + lam*g]`` at ``x``."""
    dp = system.instantiate(as_fraction(lam)).derivative()
    value = dp(float(x))
    scale = dp.term_scale(x)
    if value < -eps * scale:
        return STABLE
    if value > eps * scale:
        return UNSTABLE
    return DEGENERATE


def alternation_labels(multiplicities, sign_above: int) -> list[str]:
    """Labels for equilibria listed from the top down.

    ``sign_above`` is the sign of the vector field above the topmost
    equilibrium.  The sign flips across each equilibrium of odd multiplicity;
    an equilibrium is stable when the field points towards it from both sides.
    """
    labels = []
    above = sign_above
    for m in multiplicities:
        below = -above if m % 2 else above
        if above < 0 < below:
            labels.append(STABLE)
        elif below < 0 < above:
            labels.append(UNSTABLE)
        else:
            labels.append(DEGENERATE)
        above = below
    return labels


def probe_point(diagram: Diagram, top: float) -> float:
    """A point above every listed equilibrium in a column, with none in between.

    The default probe sits above all poles and zeros; it is pulled back to the
    top of the x window when equilibria outside the window could intervene.
    """
    pts = diagram.poles_zeros.points()
    hi = diagram.x_window[1]
    if pts:
        spread = pts[-1] - pts[0]
        probe = pts[-1] + 1 + spread
    else:
        probe = hi
    if top < probe <= hi:
        return probe
    if top < hi:
        return hi
    return top + 1e-6 * diagram.x_height


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def _column_params(diagram: Diagram, n: int) -> np.ndarray:
    lo, hi = diagram.param_window
    extra = []
    for b in diagram.branches:
        if b.slope_sign != 0:
            a, c = b.param_range
            extra.append((a + c) / 2)
    for cb in diagram.constant_branches:
        extra.extend((s.lo + s.hi) / 2 for s in cb.segments)
    return np.unique(np.concatenate([np.linspace(lo, hi, n), extra]))


def classify_by_alternation(diagram: Diagram, columns: int = 201,
                            collision: float = COLLISION_TOL) -> Diagram:
    """Step-8 labeling by vote over vertical columns.

    Columns in which two equilibria nearly coincide are skipped.  A branch
    whose votes split with the minority above 10% is left unlabeled and
    listed under ``metadata["ambiguous"]``.
    """
    params = _column_params(diagram, columns)
    cols = diagram.columns(params, refine=False)
    votes: dict[tuple, Counter] = {}
    gap_tol = collision * diagram.x_height
    for lam, col in zip(params, cols):
        if not col:
            continue
        xs = [e.x for e in col]
        if any(a - b < gap_tol for a, b in zip(xs[:-1], xs[1:])):
            continue
        probe = probe_point(diagram, xs[0])
        s = _sign(diagram.system(probe, float(lam)))
        if s == 0:
            continue
        labels = alternation_labels([e.multiplicity for e in col], s)
        for e, lab in zip(col, labels):
            key = (e.source, _segment_index(diagram, e.source, lam))
            votes.setdefault(key, Counter())[lab] += 1

    ambiguous = []

    def decide(key):
        c = votes.get(key)
        if not c:
            return None
        (lab, n), *rest = c.most_common()
        total = sum(c.values())
        if rest and (total - n) / total > AMBIGUOUS_SHARE:
            ambiguous.append(key[0])
            return None
        return lab

    branches = [replace(b, stability=decide((b.id, None))) for b in diagram.branches]
    consts = []
    for cb in diagram.constant_branches:
        segs = tuple(replace(s, stability=decide((cb.id, i))) for i, s in enumerate(cb.segments))
        consts.append(replace(cb, segments=segs))
    meta = dict(diagram.metadata)
    meta["ambiguous"] = sorted(set(ambiguous))
    return replace(diagram, branches=branches, constant_branches=consts, metadata=meta)


def _segment_index(diagram: Diagram, source: str, lam: float):
    for cb in diagram.constant_branches:
        if cb.id == source:
            for i, s in enumerate(cb.segments):
                if s.lo <= lam <= s.hi:
                    return i
    return None


def _derivative_labels(system: ParamAffineSystem, lam: np.ndarray, xs: np.ndarray,
                       eps: float) -> list[str]:
    """Vectorised :func:`derivative_stability` in float64."""
    df, dg = system.f.derivative(), system.g.derivative()
    n = max(len(df.coeffs), len(dg.coeffs))
    value = np.zeros_like(xs)
    scale = np.zeros_like(xs)
    for i in range(n):
        c = float(df[i]) + lam * float(dg[i])
        term = c * xs**i
        value += term
        scale += np.abs(term)
    out = np.full(len(xs), DEGENERATE, dtype=object)
    out[value < -eps * scale] = STABLE
    out[value > eps * scale] = UNSTABLE
    return list(out)


def _majority(labels) -> str:
    c = Counter(labels)
    if not c:
        return DEGENERATE
    (lab, n), *rest = c.most_common()
    if rest and rest[0][1] == n:
        return DEGENERATE
    return lab


def classify_by_derivative(diagram: Diagram, system: ParamAffineSystem | None = None,
                           eps: float = DEGENERATE_EPS) -> Diagram:
    """Label each branch by the majority derivative sign over its interior samples."""
    system = system or diagram.system
    lam_of = (lambda p: p) if diagram.horizontal == "lambda" else diagram.decomposition.to_lambda
    branches = []
    for b in diagram.branches:
        idx = np.arange(1, len(b) - 1) if len(b) > 2 else np.arange(len(b))
        # a few hundred evenly spread samples are plenty for a majority
        idx = idx[:: max(1, len(idx) // 256)]
        lam = np.array([lam_of(float(p)) for p in b.param[idx]])
        labels = _derivative_labels(system, lam, b.x[idx], eps)
        branches.append(replace(b, stability=_majority(labels)))
    consts = []
    for cb in diagram.constant_branches:
        segs = tuple(
            replace(s, stability=derivative_stability(system, lam_of((s.lo + s.hi) / 2), cb.x, eps))
            for s in cb.segments
        )
        consts.append(replace(cb, segments=segs))
    return replace(diagram, branches=branches, constant_branches=consts)


def constant_segments(system: ParamAffineSystem, x0: float, window: tuple[float, float],
                      crossings=()) -> tuple[ConstantSegment, ...]:
    """Split the parameter window where the linearisation at ``x0`` changes sign.

    The derivative of ``f + lam*g`` at a fixed point is affine in ``lam``, so it
    vanishes at most once unless it vanishes identically.
    """
    lo, hi = window
    cuts = []
    gp = system.g.derivative()(x0)
    if gp != 0:
        cuts.append(-system.f.derivative()(x0) / gp)
    cuts.extend(crossings)
    cuts = sorted(c for c in cuts if lo < c < hi)
    merged = []
    for c in cuts:
        if not merged or c - merged[-1] > 1e-9 * max(1.0, abs(c)):
            merged.append(c)
    edges = [lo, *merged, hi]
    return tuple(ConstantSegment(a, b) for a, b in zip(edges[:-1], edges[1:]))


def local_multiplicity(p: Polynomial, x0: float, roots: RootSet | None = None,
                       tol: float = CLUSTER_TOL) -> int:
    """Multiplicity of ``x0`` as a root of ``p`` (0 when it is not a root)."""
    if p.is_zero():
        raise ValueError("every point is a root of the zero polynomial")
    roots = real_roots(p) if roots is None else roots
    for r in roots:
        if abs(r.value - x0) <= tol * max(1.0, abs(x0)):
            return r.multiplicity
    return 0


def detect_bifurcations(diagram: Diagram, d: Decomposition | None = None,
                        tol: float = ROOT_TOL) -> list[BifurcationPoint]:
    """Folds at extrema of ``mu(x)``, and crossings with constant branches.

    A crossing is transcritical when the traced locus passes the constant
    level with simple contact, a pitchfork when it folds exactly there, and
    degenerate otherwise.  A critical point of odd order three or more is a
    degenerate fold; one of even order is a monotone inflection and not a
    bifurcation.
    """
    d = d or diagram.decomposition
    to_h = d.to_lambda if diagram.horizontal == "lambda" else (lambda m: m)
    xlo, xhi = diagram.x_window
    plo, phi = diagram.param_window
    slack = 1e-9 * max(1.0, phi - plo)
    crit_poly = critical_polynomial(d)
    crit = real_roots(crit_poly, tol) if not crit_poly.is_zero() else RootSet()
    h_roots = real_roots(d.h, tol)
    points = []

    def inside(p, x):
        return xlo - 1e-12 <= x <= xhi + 1e-12 and plo - slack <= p <= phi + slack

    def mu_at(x):
        return float(-d.f1(Fraction(x)) / d.g1(Fraction(x)))

    def participants(p, x, extra=()):
        near = 1e-9 * max(1.0, diagram.x_height)
        ids = [b.id for b in diagram.branches
               if any(abs(e.x - x) <= near and abs(e.param - p) <= 1e-7 * max(1.0, abs(p))
                      for e in (b.start, b.end))]
        return tuple([*ids, *extra])

    for r in h_roots:
        x0 = r.value
        if d.g1.is_zero() or d.g1(x0) == 0:
            continue
        mu0 = mu_at(x0)
        p0 = to_h(mu0)
        if not inside(p0, x0):
            continue
        order_p = 1 + local_multiplicity(crit_poly, x0, crit) if not crit_poly.is_zero() else 1
        if r.multiplicity == 1 and order_p == 1:
            kind = "transcritical"
        elif r.multiplicity == 1 and order_p == 2:
            kind = "pitchfork"
        else:
            kind = "degenerate"
        cid = _constant_id(diagram, x0)
        points.append(BifurcationPoint(p0, x0, kind, participants(p0, x0, (cid,) if cid else ())))

    for r in crit:
        x0 = r.value
        if r.multiplicity % 2 == 0:
            continue
        if any(abs(x0 - c.value) <= CLUSTER_TOL * max(1.0, abs(x0)) for c in h_roots):
            continue
        if d.g1(x0) == 0:
            continue
        p0 = to_h(mu_at(x0))
        if not inside(p0, x0):
            continue
        kind = "fold" if r.multiplicity == 1 else "degenerate"
        points.append(BifurcationPoint(p0, x0, kind, participants(p0, x0)))

    points.sort(key=lambda b: (b.param, b.x))
    return points


def _constant_id(diagram: Diagram, x0: float) -> str | None:
    for cb in diagram.constant_branches:
        if abs(cb.x - x0) <= CLUSTER_TOL * max(1.0, abs(x0)):
            return cb.id
    return None
