"""Acceptance criteria 1-9, each at its stated tolerance.

Every test logs one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import csv
import io
import math
import time
from fractions import Fraction

import numpy as np
from conftest import FIXTURES, build

from bifurcus import analyze
from bifurcus.diagram import STABLE, UNSTABLE, PoleZeroSet
from bifurcus.expr import ParamAffineSystem
from bifurcus.locus import SamplingConfig, sign_regions
from bifurcus.oracle import compare, default_grid, oracle_equilibria
from bifurcus.pipeline import AnalysisConfig, build_diagram
from bifurcus.poly import Polynomial, real_roots
from bifurcus.render import to_csv, to_json, to_svg
from bifurcus.stability import (
    alternation_labels,
    classify_by_alternation,
    classify_by_derivative,
    derivative_stability,
    probe_point,
)

X = Polynomial.x()


def _column(diagram, lam):
    return sorted(diagram.column(lam), key=lambda e: e.x)


def test_criterion_1_example1(record):
    with record(1, "example 1 fixture"):
        t0 = time.perf_counter()
        dg = analyze("lambda*x - x^3")
        elapsed = time.perf_counter() - t0
        d = dg.decomposition
        assert (d.h, d.f1, d.g1) == (X, X**2, Polynomial([1]))
        assert d.mu_is_minus_lambda
        assert dg.poles_zeros.poles.as_pairs() == [(0.0, 2)]
        assert len(dg.poles_zeros.zeros) == 0
        assert dg.asymptotes.vertical is None
        assert [c.x for c in dg.constant_branches] == [0.0]
        assert [(p.kind, p.param, p.x) for p in dg.bifurcations] == [("pitchfork", 0.0, 0.0)]
        col = _column(dg, 4.0)
        assert len(col) == 3, col
        for e, exact in zip(col, (-2.0, 0.0, 2.0)):
            assert abs(e.x - exact) <= 1e-8, (e.x, exact)
        assert [e.stability for e in col] == [STABLE, UNSTABLE, STABLE]
        assert elapsed < 1.0, f"runtime {elapsed:.3f} s"


def test_criterion_2_example2a(record):
    with record(2, "example 2a fixture"):
        dg = build("example2a")
        d = dg.decomposition
        assert d.mu_is_minus_lambda
        assert dg.poles_zeros.poles.as_pairs() == [(-1.0, 1), (0.0, 1), (1.0, 1)]
        assert dg.poles_zeros.zeros.as_pairs() == [(-0.5, 1)]
        assert dg.asymptotes.vertical is None
        assert dg.asymptotes.horizontal == (-0.5,)
        regions = [(r.lo, r.hi, r.mu_sign) for r in dg.sign_regions]
        assert regions == [
            (-math.inf, -1.0, -1), (-1.0, -0.5, 1), (-0.5, 0.0, -1), (0.0, 1.0, 1), (1.0, math.inf, -1)
        ]
        folds = [p for p in dg.bifurcations if p.kind == "fold"]
        sys = dg.system
        for p in folds:
            assert abs(float(sys(p.x, p.param))) <= 1e-8
            assert abs(sys.derivative_at(p.x, p.param)) <= 1e-8
        # the critical points of (x - x^3)/(2x + 1) are the real roots of 4x^3 + 3x^2 - 1
        crit = real_roots(Polynomial([-1, 0, 3, 4]))
        assert len(folds) == 2, (
            f"found {len(folds)} fold(s) at x={[round(p.x, 6) for p in folds]}; "
            f"4x^3 + 3x^2 - 1 has {len(crit)} real root(s)"
        )


def test_criterion_3_example2b(record):
    with record(3, "example 2b fixture"):
        dg = build("example2b")
        report = compare(dg, default_grid(dg, 1000))
        assert report.passed, (report.max_hausdorff_checked, report.stability_mismatches)


def test_criterion_4_example3(record):
    with record(4, "example 3 fixture"):
        dg = build("example3")
        d = dg.decomposition
        assert d.mu_is_minus_lambda
        assert dg.poles_zeros.poles.as_pairs() == [(0.0, 4)]
        assert dg.poles_zeros.zeros.as_pairs() == [(-1.0, 1), (1.0, 1)]
        assert [c.x for c in dg.constant_branches] == [0.0]
        assert dg.asymptotes.horizontal == (1.0,)
        assert dg.x_window[0] == 0.0
        col = _column(dg, 5.0)
        exact = [0.0, math.sqrt((5 - math.sqrt(5)) / 2), math.sqrt((5 + math.sqrt(5)) / 2)]
        assert len(col) == 3, col
        for e, r in zip(col, exact):
            assert abs(e.x - r) <= 1e-6, (e.x, r)
        assert [e.stability for e in col] == [UNSTABLE, STABLE, UNSTABLE]
        oracle = [lab for x, _, lab in oracle_equilibria(dg.system, 5).equilibria if x >= 0]
        assert [e.stability for e in col] == oracle
        assert [derivative_stability(dg.system, 5.0, r) for r in exact] == oracle


def test_criterion_5_oracle_equivalence(record):
    with record(5, "oracle equivalence on all fixtures"):
        t0 = time.perf_counter()
        failures = []
        for name in FIXTURES:
            dg = build(name)
            rep = compare(dg, default_grid(dg, 1000), tol=1e-4)
            if not rep.passed:
                failures.append((name, rep.max_hausdorff_checked, rep.worst_lambda, rep.stability_mismatches))
        elapsed = time.perf_counter() - t0
        assert not failures, failures
        assert elapsed < 10.0, f"runtime {elapsed:.2f} s"


def test_criterion_6_sign_rule(record, coprime_pairs):
    with record(6, "sign rule on 100 random coprime pairs"):
        rng = np.random.default_rng(6)
        checked = 0
        for f1, g1 in coprime_pairs:
            pz = PoleZeroSet(real_roots(f1), real_roots(g1))
            regions = sign_regions(pz)
            pts = pz.points()
            lo, hi = (pts[0] - 3, pts[-1] + 3) if pts else (-5, 5)
            for x in rng.uniform(lo, hi, 100):
                if any(abs(x - p) < 1e-6 for p in pts):
                    continue
                xq = Fraction(float(x))
                value = -f1(xq) / g1(xq)
                region = next(r for r in regions if r.contains(float(x)))
                assert (value > 0) == (region.mu_sign > 0), (f1, g1, x)
                checked += 1
        assert checked >= 9900


def test_criterion_7_alternation(record, coprime_pairs):
    with record(7, "alternation agrees with derivative sign"):
        rng = np.random.default_rng(7)
        cfg = AnalysisConfig(param_window=(-5.0, 5.0),
                             sampling=SamplingConfig(initial_samples=64, max_samples=4096))
        compared = 0
        for f1, g1 in coprime_pairs:
            sys = ParamAffineSystem("x", "lambda", f1, g1)
            dg = build_diagram(sys, cfg)
            alt = classify_by_alternation(dg)
            der = classify_by_derivative(dg)
            for lam in rng.uniform(-5, 5, 20):
                # property on the raw polynomial: simple roots alternate
                col = oracle_equilibria(sys, float(lam)).equilibria
                simple = [(x, lab) for x, m, lab in col if m == 1]
                if len(simple) == len(col):
                    signs = [derivative_stability(sys, float(lam), x) for x, _ in simple]
                    assert all(a != b for a, b in zip(signs, signs[1:])), (f1, g1, lam, signs)
                    # the column rule from the top down reproduces the derivative labels
                    if col:
                        probe = probe_point(dg, col[-1][0])
                        s = 1 if sys(probe, float(lam)) > 0 else -1
                        labels = alternation_labels([1] * len(col), s)[::-1]
                        assert labels == signs, (f1, g1, lam)
                # diagram level: branch labels from both classifiers agree on simple equilibria
                a_col = alt.column(float(lam))
                d_col = der.column(float(lam))
                for ea, ed in zip(a_col, d_col):
                    exact = derivative_stability(sys, float(lam), ea.x)
                    if exact == "degenerate" or ea.stability is None:
                        continue
                    assert ea.stability == ed.stability, (f1, g1, lam, ea, ed)
                    compared += 1
        assert compared > 0


def test_criterion_8_csv_residual(record, diagrams):
    with record(8, "CSV rows satisfy the residual bound"):
        worst = 0.0
        for name, dg in diagrams.items():
            rows = list(csv.DictReader(io.StringIO(to_csv(dg))))
            lam = np.array([float(r["lambda"]) for r in rows])
            xs = np.array([float(r["x"]) for r in rows])
            f, g = dg.system.f, dg.system.g
            res = np.zeros_like(xs)
            scale = np.zeros_like(xs)
            for i in range(max(len(f.coeffs), len(g.coeffs))):
                term = (float(f[i]) + lam * float(g[i])) * xs**i
                res += term
                scale += np.abs(term)
            bad = np.abs(res) > 1e-9 * scale
            assert not bad.any(), (name, rows[int(np.argmax(bad))])
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.where(scale > 0, np.abs(res) / scale, 0.0)
            worst = max(worst, float(rel.max()))
        print(f"worst relative residual {worst:.3g}")


def test_criterion_9_determinism(record):
    with record(9, "byte-identical artifacts across runs"):
        for name in FIXTURES:
            a, b = build(name), build(name)
            for emit in (to_svg, to_csv, to_json):
                assert emit(a).encode() == emit(b).encode(), (name, emit.__name__)
