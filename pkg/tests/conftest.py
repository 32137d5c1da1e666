import contextlib
import time

import numpy as np
import pytest

from bifurcus import analyze
from bifurcus.pipeline import AnalysisConfig
from bifurcus.poly import Polynomial, gcd

# name -> (expression, state, parameter, multiply_state, domain_min)
FIXTURES = {
    "example1": ("lambda*x - x^3", "x", "lambda", False, None),
    "example2a": ("c + (1+2*c)*x - x^3", "x", "c", False, None),
    "example2b": ("c + (1+0.5*c)*x - x^3", "x", "c", False, None),
    "example3": ("lambda - lambda*r^2 + r^4", "r", "lambda", True, 0.0),
}


def build(name):
    expr, state, param, mult, dmin = FIXTURES[name]
    return analyze(expr, state, param, mult, AnalysisConfig(domain_min=dmin))


@pytest.fixture(scope="session")
def diagrams():
    return {name: build(name) for name in FIXTURES}


def random_coprime_pairs(n=100, max_degree=6, seed=20240611):
    """Integer pairs (f1, g1) with positive leading coefficients and gcd 1."""
    rng = np.random.default_rng(seed)

    def poly(deg):
        c = [int(v) for v in rng.integers(-6, 7, deg + 1)]
        c[-1] = int(rng.integers(1, 7))
        return Polynomial(c)

    pairs = []
    while len(pairs) < n:
        f1 = poly(int(rng.integers(1, max_degree + 1)))
        g1 = poly(int(rng.integers(0, max_degree + 1)))
        if gcd(f1, g1).degree == 0:
            pairs.append((f1, g1))
    return pairs


@pytest.fixture(scope="session")
def coprime_pairs():
    return random_coprime_pairs()


@pytest.fixture
def record(request):
    """Context manager that logs a PASS/FAIL line for an acceptance criterion."""
    log = request.config.stash.setdefault(_LOG, [])

    @contextlib.contextmanager
    def run(number, title):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            line = f"criterion {number} ({title}): FAIL - {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}"
            log.append(line)
            print(line)
            raise
        line = f"criterion {number} ({title}): PASS [{time.perf_counter() - start:.2f} s]"
        log.append(line)
        print(line)

    return run


_LOG = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_LOG, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for line in sorted(log, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
