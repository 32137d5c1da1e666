"""Root-locus construction of the equilibrium set of ``f(x) + lambda*g(x) = 0``.

The common factor ``h = gcd(f, g)`` is split off as parameter-independent
equilibria.  What remains is written as ``f1(x) + mu*g1(x) = 0`` with positive
leading coefficients, so the locus is the graph of the rational function
``mu(x) = -f1(x)/g1(x)``: roots of ``f1`` (poles) sit at ``mu = 0`` and roots
of ``g1`` (zeros) are approached as ``mu -> +-inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .diagram import (
    ENDPOINT_KINDS,
    Asymptotes,
    Branch,
    Decomposition,
    Diagram,
    Endpoint,
    PoleZeroSet,
    SignRegion,
    negate,
)
from .expr import ParamAffineSystem
from .poly import ROOT_TOL, Polynomial, RootSet, gcd, real_roots

__all__ = [
    "SamplingConfig",
    "decompose",
    "poles_zeros",
    "sign_regions",
    "vertical_asymptote",
    "horizontal_asymptotes",
    "critical_polynomial",
    "default_x_window",
    "cover_window",
    "trace_branches",
    "constant_branches",
    "flip_to_lambda",
]


@dataclass(frozen=True)
class SamplingConfig:
    initial_samples: int = 512
    max_samples: int = 1 << 16
    # screen-space budget: max gap between consecutive samples, in pixels
    resolution_px: float = 1.0
    canvas: tuple[int, int] = (640, 480)
    # max deviation of the chord from the curve at fixed parameter, relative to window height
    interp_tol: float = 1e-8
    # no refinement below this x step, relative to window width
    min_step: float = 1e-7


def decompose(system: ParamAffineSystem) -> Decomposition:
    """Split off ``h = gcd(f, g)`` and normalise both remaining leading coefficients to be positive."""
    f, g = system.f, system.g
    if g.is_zero():
        raise ValueError("g is identically zero; there is no bifurcation parameter")
    h = gcd(f, g)
    F, G = f // h, g // h
    sign = -1 if F.lead < 0 else 1
    f1 = F * sign
    sG = G * sign
    flip = sG.lead < 0
    g1 = -sG if flip else sG
    if f1.is_zero():
        # f == 0: the locus collapses onto mu = 0
        sign, f1, flip = 1, Polynomial(), G.lead < 0
        g1 = -G if flip else G
    return Decomposition(h, f1, g1, sign, flip)


def poles_zeros(d: Decomposition, tol: float = ROOT_TOL) -> PoleZeroSet:
    poles = real_roots(d.f1, tol) if not d.f1.is_zero() else RootSet()
    zeros = real_roots(d.g1, tol)
    return PoleZeroSet(poles, zeros)


def sign_regions(pz: PoleZeroSet) -> list[SignRegion]:
    """Label each gap between poles and zeros with the sign of ``mu`` on it.

    A gap carries ``mu > 0`` exactly when an odd number of poles and zeros,
    counted with multiplicity, lie above it.
    """
    weight: dict[float, int] = {}
    for r in (*pz.poles, *pz.zeros):
        weight[r.value] = weight.get(r.value, 0) + r.multiplicity
    cuts = sorted(weight)
    edges = [-math.inf, *cuts, math.inf]
    regions = []
    above = sum(weight.values())
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo != -math.inf:
            above -= weight[lo]
        regions.append(SignRegion(lo, hi, 1 if above % 2 else -1, above))
    return regions


def vertical_asymptote(d: Decomposition) -> float | None:
    """``-lim f1/g1`` as x grows, when that limit is finite."""
    if d.f1.is_zero():
        return 0.0
    if d.f1.degree > d.g1.degree:
        return None
    if d.f1.degree < d.g1.degree:
        return 0.0
    return float(-d.f1.lead / d.g1.lead)


def horizontal_asymptotes(pz: PoleZeroSet) -> list[float]:
    return list(pz.zeros.values)


def critical_polynomial(d: Decomposition) -> Polynomial:
    """Numerator of ``d mu/dx`` up to sign: ``f1' g1 - f1 g1'``."""
    return d.f1.derivative() * d.g1 - d.f1 * d.g1.derivative()


def default_x_window(pz: PoleZeroSet, extra=()) -> tuple[float, float]:
    pts = sorted({*pz.points(), *extra})
    if len(pts) < 2:
        lo, hi = -10.0, 10.0
    else:
        spread = pts[-1] - pts[0]
        lo, hi = pts[0] - 2 * spread, pts[-1] + 2 * spread
    return cover_window((lo, hi), pts)


def cover_window(window, pts, pad=1.0) -> tuple[float, float]:
    lo, hi = float(window[0]), float(window[1])
    if pts:
        if min(pts) < lo:
            lo = min(pts) - pad
        if max(pts) > hi:
            hi = max(pts) + pad
    return lo, hi


def constant_branches(d: Decomposition, tol: float = ROOT_TOL) -> RootSet:
    """Roots of ``h``: equilibria that do not move with the parameter."""
    return real_roots(d.h, tol)


# tracing


def _kind(kinds: set[str]) -> str:
    for k in ENDPOINT_KINDS:
        if k in kinds:
            return k
    return "boundary"


def _split_points(lo, hi, crit, zeros, h_roots, poles, edge_kind, lo_kind):
    tol = 1e-12 * max(1.0, hi - lo)
    pts: list[tuple[float, set[str]]] = [(lo, {lo_kind}), (hi, {edge_kind})]

    def add(x, kind):
        if x < lo - tol or x > hi + tol:
            return
        for y, ks in pts:
            if abs(y - x) <= tol:
                ks.add(kind)
                return
        pts.append((x, {kind}))

    for r in crit:
        add(r.value, "fold" if r.multiplicity % 2 else "critical")
    for r in zeros:
        add(r.value, "zero")
    for r in h_roots:
        add(r.value, "crossing")
    for r in poles:
        # poles only label split points, they do not split branches
        for y, ks in pts:
            if abs(y - r.value) <= tol:
                ks.add("pole")
    pts.sort(key=lambda t: t[0])
    return pts


def _refine_samples(xs, mu_fn, cfg: SamplingConfig, x_span, mu_span):
    w, h = cfg.canvas
    tol_x = cfg.interp_tol * x_span
    min_dx = cfg.min_step * x_span
    mu = mu_fn(xs)
    while len(xs) < cfg.max_samples:
        dx = np.diff(xs)
        dm = np.diff(mu)
        xm = xs[:-1] + dx / 2
        mm = mu_fn(xm)
        gap = np.hypot(dm / mu_span * w, dx / x_span * h) > cfg.resolution_px
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (mm - mu[:-1]) / dm
            dev = np.abs(xs[:-1] + t * dx - xm)
        need = (gap | (dev > tol_x)) & (dx > min_dx)
        idx = np.flatnonzero(need)
        if not len(idx):
            break
        room = cfg.max_samples - len(xs)
        if len(idx) > room:
            idx = np.sort(idx[np.argsort(-dx[idx], kind="stable")[:room]])
        xs = np.insert(xs, idx + 1, xm[idx])
        mu = np.insert(mu, idx + 1, mm[idx])
    return xs, mu


def _strictly_monotone(xs, mu, s):
    # rounding near folds can produce flat or reversed steps; drop those samples
    v = s * mu
    keep = np.zeros(len(v), dtype=bool)
    keep[0] = keep[-1] = True
    if len(v) > 2:
        prev = np.maximum.accumulate(v[:-1])
        inner = (v[1:-1] > prev[:-1]) & (v[1:-1] < v[-1])
        keep[1:-1] = inner
    return xs[keep], mu[keep]


def trace_branches(
    d: Decomposition,
    pz: PoleZeroSet,
    x_window: tuple[float, float] | None = None,
    mu_window: tuple[float, float] = (-20.0, 20.0),
    config: SamplingConfig | None = None,
    domain_min: float | None = None,
    h_roots: RootSet | None = None,
    tol: float = ROOT_TOL,
) -> list[Branch]:
    """Sample ``mu(x) = -f1(x)/g1(x)`` and cut it into monotone branches.

    Cuts are made at the real critical points of ``mu`` (folds), at zeros of
    ``g1`` (where the locus escapes towards a horizontal asymptote), at roots
    of ``h`` (crossings with constant branches) and where the curve leaves the
    ``x`` or ``mu`` window.  Samples are in ``mu`` coordinates.
    """
    cfg = config or SamplingConfig()
    h_roots = constant_branches(d, tol) if h_roots is None else h_roots
    if x_window is None:
        x_window = default_x_window(pz, h_roots.values)
    f1, g1 = d.f1, d.g1
    edge_kind = "vertical_asymptote" if f1.degree <= g1.degree else "boundary"
    lo, hi = cover_window(x_window, pz.points())
    lo_kind = edge_kind
    if domain_min is not None and domain_min > lo:
        lo, lo_kind = float(domain_min), "boundary"
    if not hi > lo:
        return []
    mlo, mhi = float(mu_window[0]), float(mu_window[1])
    x_span, mu_span = hi - lo, mhi - mlo

    if f1.is_constant() and g1.is_constant():
        mu0 = float(-f1[0] / g1[0])
        if not mlo <= mu0 <= mhi:
            return []
        xs = np.linspace(lo, hi, cfg.initial_samples)
        return [Branch("b-0", np.full_like(xs, mu0), xs, 0,
                       Endpoint("boundary", mu0, lo), Endpoint("boundary", mu0, hi))]

    crit_poly = critical_polynomial(d)
    crit = real_roots(crit_poly, tol) if not crit_poly.is_zero() else RootSet()
    splits = _split_points(lo, hi, crit, pz.zeros, h_roots, pz.poles, edge_kind, lo_kind)
    exits = []
    for bound in (mlo, mhi):
        p = f1 + g1 * Fraction(bound)
        if not p.is_zero():
            exits.extend((r.value, bound) for r in real_roots(p, tol))

    def mu_fn(xs):
        return d.mu_of_x(xs)

    branches = []
    for (a, ka), (b, kb) in zip(splits[:-1], splits[1:]):
        if b - a <= 1e-12 * x_span:
            continue
        cuts = [(a, _kind(ka)), *[(x, "exit") for x, _ in exits if a < x < b], (b, _kind(kb))]
        cuts.sort(key=lambda t: t[0])
        for (u, ku), (v, kv) in zip(cuts[:-1], cuts[1:]):
            if v - u <= 1e-12 * x_span:
                continue
            mid = float(mu_fn(np.array([(u + v) / 2]))[0])
            if not mlo <= mid <= mhi:
                continue
            xs = np.linspace(u, v, cfg.initial_samples)
            xs, mu = _refine_samples(xs, mu_fn, cfg, x_span, mu_span)
            # pin window exits onto the bound itself; x is a certified root there
            for i, (edge, k) in ((0, (u, ku)), (-1, (v, kv))):
                if k == "exit":
                    mu[i] = next(m for x, m in exits if x == edge)
            # a parameter-window exit heads towards a zero of g1 when one bounds the piece
            if ku == "exit":
                ku = "horizontal_asymptote" if "zero" in ka else "boundary"
            if kv == "exit":
                kv = "horizontal_asymptote" if "zero" in kb else "boundary"
            s = 1 if mu[-1] > mu[0] else -1
            xs, mu = _strictly_monotone(xs, mu, s)
            branches.append(Branch(
                "", mu, xs, s,
                Endpoint(ku, float(mu[0]), float(xs[0])),
                Endpoint(kv, float(mu[-1]), float(xs[-1])),
            ))
    branches.sort(key=lambda br: (br.x[0], br.slope_sign))
    return [replace(br, id=f"b-{i}") for i, br in enumerate(branches)]


def flip_to_lambda(diagram: Diagram, mu_is_minus_lambda: bool) -> Diagram:
    """Mirror the diagram about the vertical axis when ``mu = -lambda``.

    Applying it twice restores the input.
    """
    horizontal = "lambda" if diagram.horizontal == "mu" else "mu"
    if not mu_is_minus_lambda:
        return replace(diagram, horizontal=horizontal)
    lo, hi = diagram.param_window
    v = diagram.asymptotes.vertical
    return replace(
        diagram,
        horizontal=horizontal,
        branches=[b.flipped() for b in diagram.branches],
        constant_branches=[c.flipped() for c in diagram.constant_branches],
        bifurcations=[replace(p, param=negate(p.param)) for p in diagram.bifurcations],
        asymptotes=replace(diagram.asymptotes, vertical=None if v is None else negate(v)),
        param_window=(negate(hi), negate(lo)),
    )
