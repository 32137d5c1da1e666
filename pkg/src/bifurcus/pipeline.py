"""End-to-end construction of a labelled bifurcation diagram."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .diagram import Asymptotes, ConstantBranch, Diagram
from .expr import ParamAffineSystem, parse_system
from .locus import (
    SamplingConfig,
    constant_branches,
    decompose,
    cover_window,
    default_x_window,
    flip_to_lambda,
    horizontal_asymptotes,
    poles_zeros,
    sign_regions,
    trace_branches,
    vertical_asymptote,
)
from .poly import CLUSTER_TOL, ROOT_TOL
from .stability import (
    DEGENERATE_EPS,
    classify_by_alternation,
    classify_by_derivative,
    constant_segments,
    detect_bifurcations,
)

log = logging.getLogger(__name__)

__all__ = ["AnalysisConfig", "analyze", "build_diagram"]


@dataclass(frozen=True)
class AnalysisConfig:
    x_window: tuple[float, float] | None = None
    # explicit parameter window; derived from the traced locus when None
    param_window: tuple[float, float] | None = None
    param_bound: tuple[float, float] = (-20.0, 20.0)
    domain_min: float | None = None
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    root_tol: float = ROOT_TOL
    residual_tol: float = 1e-9
    cluster_tol: float = CLUSTER_TOL
    degenerate_eps: float = DEGENERATE_EPS
    alternation_columns: int = 201


def analyze(expression: str, state: str = "x", param: str = "lambda",
            multiply_state: bool = False, config: AnalysisConfig | None = None) -> Diagram:
    """Parse ``expression`` and build its diagram.

    >>> dg = analyze("lambda*x - x^3")
    >>> [(b.kind, b.param, b.x) for b in dg.bifurcations]
    [('pitchfork', 0.0, 0.0)]
    """
    system = parse_system(expression, state, param, multiply_state)
    return build_diagram(system, config)


def _derived_window(branches, bound) -> tuple[float, float]:
    lo, hi = 0.0, 0.0
    for b in branches:
        a, c = b.param_range
        lo, hi = min(lo, a), max(hi, c)
    pad = max(1.0, 0.1 * (hi - lo))
    return max(bound[0], lo - pad), min(bound[1], hi + pad)


def build_diagram(system: ParamAffineSystem, config: AnalysisConfig | None = None) -> Diagram:
    cfg = config or AnalysisConfig()
    d = decompose(system)
    pz = poles_zeros(d, cfg.root_tol)
    h_roots = constant_branches(d, cfg.root_tol)

    bound = cfg.param_window or cfg.param_bound
    mu_bound = tuple(sorted((d.to_mu(bound[0]), d.to_mu(bound[1]))))
    x_window = cover_window(cfg.x_window or default_x_window(pz, h_roots.values), pz.points())
    branches = trace_branches(d, pz, x_window, mu_bound, cfg.sampling, cfg.domain_min,
                              h_roots, cfg.root_tol)
    if cfg.domain_min is not None and cfg.domain_min > x_window[0]:
        x_window = (float(cfg.domain_min), x_window[1])

    asym = Asymptotes(vertical_asymptote(d), tuple(horizontal_asymptotes(pz)))
    diagram = Diagram(
        system=system,
        decomposition=d,
        poles_zeros=pz,
        sign_regions=tuple(sign_regions(pz)),
        asymptotes=asym,
        branches=branches,
        constant_branches=[],
        bifurcations=[],
        x_window=x_window,
        param_window=mu_bound,
        horizontal="mu",
        domain_min=cfg.domain_min,
    )
    diagram = flip_to_lambda(diagram, d.mu_is_minus_lambda)
    if cfg.param_window is not None:
        param_window = tuple(map(float, cfg.param_window))
    else:
        param_window = _derived_window(diagram.branches, cfg.param_bound)

    visible = [r for r in h_roots if x_window[0] <= r.value <= x_window[1]]
    consts = []
    for i, r in enumerate(visible):
        crossings = []
        if not d.g1.is_zero() and d.g1(r.value) != 0:
            crossings.append(d.to_lambda(-d.f1(r.value) / d.g1(r.value)))
        consts.append(ConstantBranch(f"const-{i}", r.value, r.multiplicity,
                                     constant_segments(system, r.value, param_window, crossings)))
    horizontal = tuple(z for z in asym.horizontal if x_window[0] <= z <= x_window[1])
    diagram = replace(
        diagram,
        constant_branches=consts,
        param_window=param_window,
        asymptotes=replace(diagram.asymptotes, horizontal=horizontal),
    )
    diagram = replace(diagram, bifurcations=detect_bifurcations(diagram, d, cfg.root_tol))

    alt = classify_by_alternation(diagram, cfg.alternation_columns)
    der = classify_by_derivative(diagram, system, cfg.degenerate_eps)
    disagreements = []
    branches = []
    for a, b in zip(alt.branches, der.branches):
        if a.stability is not None and a.stability != b.stability:
            disagreements.append(a.id)
        branches.append(a if a.stability is not None else b)
    consts = []
    for a, b in zip(alt.constant_branches, der.constant_branches):
        segs = []
        for sa, sb in zip(a.segments, b.segments):
            if sa.stability is not None and sa.stability != sb.stability:
                disagreements.append(a.id)
            segs.append(sa if sa.stability is not None else sb)
        consts.append(replace(a, segments=tuple(segs)))
    if disagreements:
        log.warning("alternation and derivative labels disagree on %s", disagreements)

    samples = sum(len(b) for b in branches)
    metadata = {
        "expression": system.source or system.to_text(),
        "state": system.state,
        "parameter": system.param,
        "tolerances": {
            "root": cfg.root_tol,
            "residual": cfg.residual_tol,
            "cluster": cfg.cluster_tol,
            "degenerate": cfg.degenerate_eps,
        },
        "sampling": {
            "initial_samples": cfg.sampling.initial_samples,
            "max_samples": cfg.sampling.max_samples,
            "resolution_px": cfg.sampling.resolution_px,
            "interp_tol": cfg.sampling.interp_tol,
        },
        "sample_count": int(samples),
        "ambiguous": alt.metadata.get("ambiguous", []),
        "stability_disagreements": sorted(set(disagreements)),
    }
    return replace(diagram, branches=branches, constant_branches=consts, metadata=metadata)


def max_residual(diagram: Diagram) -> float:
    """Largest ``|f(x) + lambda*g(x)| / scale`` over every traced sample."""
    worst = 0.0
    sys = diagram.system
    for b in diagram.branches:
        lam = b.param if diagram.horizontal == "lambda" else diagram.decomposition.to_lambda(b.param)
        # vectorised float residual; adequate for reporting
        fx, gx = sys.f.evalf(b.x), sys.g.evalf(b.x)
        scale = np.zeros_like(b.x)
        ax = np.abs(b.x)
        for i in range(max(len(sys.f), len(sys.g))):
            scale += np.abs(float(sys.f[i]) + lam * float(sys.g[i])) * ax**i
        res = np.abs(fx + lam * gx)
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(scale > 0, res / scale, res)
        worst = max(worst, float(np.max(rel, initial=0.0)))
    return worst
