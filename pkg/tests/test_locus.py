import math
from fractions import Fraction

import numpy as np
import pytest

from bifurcus import analyze
from bifurcus.diagram import PoleZeroSet
from bifurcus.expr import ParamAffineSystem, parse_system
from bifurcus.locus import (
    constant_branches,
    critical_polynomial,
    decompose,
    flip_to_lambda,
    horizontal_asymptotes,
    poles_zeros,
    sign_regions,
    trace_branches,
    vertical_asymptote,
)
from bifurcus.pipeline import AnalysisConfig, max_residual
from bifurcus.poly import Polynomial, real_roots

X = Polynomial.x()
ONE = Polynomial([1])


def system(f, g):
    return ParamAffineSystem("x", "lambda", f, g)


def check_identity(sys, d):
    # s*(f + lambda*g) == h*(f1 + mu*g1) with mu = -lambda when flagged
    assert sys.f * d.sign == d.h * d.f1
    assert sys.g * d.sign == d.h * d.g1 * (-1 if d.mu_is_minus_lambda else 1)


@pytest.mark.parametrize(
    "f, g, h, f1, g1, flip",
    [
        (-(X**3), X, X, X**2, ONE, True),
        (X - X**3, 2 * X + 1, ONE, X**3 - X, 2 * X + 1, True),
        (X**2 + 1, X, ONE, X**2 + 1, X, False),
    ],
)
def test_decompose_examples(f, g, h, f1, g1, flip):
    sys = system(f, g)
    d = decompose(sys)
    assert (d.h, d.f1, d.g1, d.mu_is_minus_lambda) == (h, f1, g1, flip)
    assert d.f1.lead > 0 and d.g1.lead > 0
    check_identity(sys, d)


def test_decompose_rejects_zero_g():
    with pytest.raises(ValueError):
        decompose(system(X, Polynomial()))


def test_decompose_identity_random(coprime_pairs):
    rng = np.random.default_rng(3)
    for f1, g1 in coprime_pairs[:40]:
        h = Polynomial([int(v) for v in rng.integers(-3, 4, 3)])
        if h.is_zero():
            continue
        sf, sg = (int(v) for v in rng.choice([-1, 1], 2))
        sys = system(f1 * h * sf, g1 * h * sg)
        d = decompose(sys)
        check_identity(sys, d)
        assert d.f1.lead > 0 and d.g1.lead > 0


def test_poles_zeros_examples():
    d1 = decompose(parse_system("lambda*x - x^3"))
    pz = poles_zeros(d1)
    assert pz.poles.as_pairs() == [(0.0, 2)] and not pz.zeros
    pz = poles_zeros(decompose(parse_system("c + (1+2*c)*x - x^3", param="c")))
    assert pz.poles.values == [-1.0, 0.0, 1.0] and pz.zeros.values == [-0.5]
    pz = poles_zeros(decompose(parse_system("lambda - lambda*r^2 + r^4", "r", multiply_state=True)))
    assert pz.poles.as_pairs() == [(0.0, 4)] and pz.zeros.values == [-1.0, 1.0]


def test_sign_region_examples():
    rs = sign_regions(PoleZeroSet(real_roots(X**2), real_roots(ONE)))
    assert [(r.lo, r.hi, r.count_above, r.mu_sign) for r in rs] == [
        (-math.inf, 0.0, 2, -1), (0.0, math.inf, 0, -1)]
    rs = sign_regions(PoleZeroSet(real_roots(X**3 - X), real_roots(2 * X + 1)))
    assert [r.mu_sign for r in rs] == [-1, 1, -1, 1, -1]
    rs = sign_regions(PoleZeroSet(real_roots(X**2 + 1), real_roots(ONE)))
    assert [(r.lo, r.hi, r.mu_sign) for r in rs] == [(-math.inf, math.inf, -1)]


def test_sign_rule_matches_locus_sign(coprime_pairs):
    rng = np.random.default_rng(11)
    for f1, g1 in coprime_pairs:
        pz = PoleZeroSet(real_roots(f1), real_roots(g1))
        regions = sign_regions(pz)
        for r in regions:
            assert (r.mu_sign > 0) == (r.count_above % 2 == 1)
        for x in rng.uniform(-8, 8, 100):
            if any(abs(x - p) < 1e-6 for p in pz.points()):
                continue
            v = -f1(Fraction(x)) / g1(Fraction(x))
            region = next(r for r in regions if r.contains(x))
            assert (v > 0) == (region.mu_sign > 0)


def test_vertical_asymptote_examples():
    assert vertical_asymptote(decompose(parse_system("c + (1+2*c)*x - x^3", param="c"))) is None
    d = decompose(system(ONE, -X))  # f1 = 1, g1 = x
    assert (d.f1, d.g1) == (ONE, X)
    assert vertical_asymptote(d) == 0.0
    d = decompose(system(X**2 - 1, -(X**2) - 2))
    assert (d.f1, d.g1) == (X**2 - 1, X**2 + 2)
    assert vertical_asymptote(d) == -1.0
    # independent check: mu(x) = -f1/g1 converges to -1 for large x
    for x in (1e3, 1e4):
        assert abs(float(-d.f1(Fraction(x)) / d.g1(Fraction(x))) - (-1.0)) < 10 / x**2


def test_horizontal_asymptote_examples():
    pz = poles_zeros(decompose(parse_system("c + (1+2*c)*x - x^3", param="c")))
    assert horizontal_asymptotes(pz) == [-0.5]
    pz = poles_zeros(decompose(parse_system("lambda - lambda*r^2 + r^4", "r", multiply_state=True)))
    assert horizontal_asymptotes(pz) == [-1.0, 1.0]
    assert horizontal_asymptotes(poles_zeros(decompose(parse_system("lambda*x - x^3")))) == []


def test_constant_branch_examples():
    assert constant_branches(decompose(parse_system("lambda*x - x^3"))).values == [0.0]
    assert constant_branches(decompose(parse_system("c + (1+2*c)*x - x^3", param="c"))).values == []
    d = decompose(parse_system("lambda - lambda*r^2 + r^4", "r", multiply_state=True))
    assert constant_branches(d).values == [0.0]


def test_trace_example1_splits_at_critical_point():
    d = decompose(parse_system("lambda*x - x^3"))
    brs = trace_branches(d, poles_zeros(d))
    assert len(brs) == 2
    assert brs[0].end.x == 0.0 and brs[1].start.x == 0.0
    assert brs[0].end.param == 0.0
    for b in brs:
        assert np.all(b.param <= 0)
        assert np.allclose(b.param, -b.x**2)


def test_trace_monotone_line():
    d = decompose(system(-X, ONE))  # f1 = x, g1 = 1 after normalisation
    brs = trace_branches(d, poles_zeros(d))
    assert len(brs) == 1
    assert critical_polynomial(d).degree == 0


def test_trace_example2_branches_meet_horizontal_asymptote():
    d = decompose(parse_system("c + (1+2*c)*x - x^3", param="c"))
    brs = trace_branches(d, poles_zeros(d))
    kinds = [k for b in brs for k in (b.start.kind, b.end.kind)]
    assert kinds.count("horizontal_asymptote") == 2
    near_zero = [e.x for b in brs for e in (b.start, b.end) if e.kind == "horizontal_asymptote"]
    assert all(abs(x + 0.5) < 0.05 for x in near_zero)


@pytest.mark.parametrize("name", ["example1", "example2a", "example2b", "example3"])
def test_branch_invariants(diagrams, name):
    dg = diagrams[name]
    d = dg.decomposition
    assert max_residual(dg) <= 1e-9
    pts = dg.poles_zeros.points()
    for b in dg.branches:
        steps = np.sign(np.diff(b.param))
        assert np.all(steps == b.slope_sign), b.id
        mu = d.to_mu(b.param)
        inner = (mu != 0)
        for r in dg.sign_regions:
            sel = inner & (b.x > r.lo) & (b.x < r.hi)
            assert np.all(np.sign(mu[sel]) == r.mu_sign)
        for e in (b.start, b.end):
            if abs(e.param) <= 1e-12:
                assert min(abs(e.x - p) for p in dg.poles_zeros.poles.values) <= 1e-8
    # the equilibria at mu = 0 are exactly the poles in the window
    col = sorted({round(e.x, 9) for e in dg.column(0.0) if e.source.startswith("b-")})
    inside = [p for p in dg.poles_zeros.poles.values if dg.x_window[0] <= p <= dg.x_window[1]]
    assert len(col) == len(inside)
    for x, p in zip(col, inside):
        assert abs(x - p) <= 1e-8
    assert pts == sorted(pts)


def test_large_mu_samples_sit_near_zeros():
    cfg = AnalysisConfig(param_window=(-1e7, 1e7))
    dg = analyze("c + (1+2*c)*x - x^3", param="c", config=cfg)
    zeros = dg.poles_zeros.zeros.values
    lo, hi = dg.x_window
    for b in dg.branches:
        big = np.abs(b.param) > 1e6
        for x in b.x[big]:
            assert min(abs(x - z) for z in zeros) < 1e-3 or x <= lo or x >= hi


def test_flip_is_involution(diagrams):
    for dg in diagrams.values():
        twice = flip_to_lambda(flip_to_lambda(dg, True), True)
        assert twice.branches == dg.branches
        assert twice.constant_branches == dg.constant_branches
        assert twice.bifurcations == dg.bifurcations
        assert twice.param_window == dg.param_window
        assert twice.horizontal == dg.horizontal
        same = flip_to_lambda(dg, False)
        assert same.branches == dg.branches


def test_example1_pitchfork_arms_after_flip(diagrams):
    dg = diagrams["example1"]
    for b in dg.branches:
        assert np.all(b.param >= 0)
        assert np.allclose(np.abs(b.x), np.sqrt(b.param), atol=1e-12)


def test_domain_clip(diagrams):
    dg = diagrams["example3"]
    assert all(np.all(b.x >= 0) for b in dg.branches)
    assert dg.asymptotes.horizontal == (1.0,)
