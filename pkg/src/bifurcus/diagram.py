"""Data containers for a bifurcation diagram.

The horizontal coordinate of every branch sample is stored in ``param``.
Depending on :attr:`Diagram.horizontal` it is the locus gain ``mu`` or the
system parameter ``lambda``; :func:`bifurcus.locus.flip_to_lambda` converts
between the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .expr import ParamAffineSystem
from .poly import Polynomial, RootSet

STABLE = "stable"
UNSTABLE = "unstable"
DEGENERATE = "degenerate"

# endpoint descriptors, most specific first
ENDPOINT_KINDS = (
    "fold",
    "crossing",
    "pole",
    "critical",
    "horizontal_asymptote",
    "vertical_asymptote",
    "boundary",
)


def negate(v):
    """Negation that never produces a signed zero."""
    return -v + 0.0


@dataclass(frozen=True)
class Decomposition:
    """``sign*(f + lambda*g) == h*(f1 + mu*g1)`` with ``mu = -lambda`` iff the flag is set."""

    h: Polynomial
    f1: Polynomial
    g1: Polynomial
    sign: int
    mu_is_minus_lambda: bool

    def to_lambda(self, mu):
        return negate(mu) if self.mu_is_minus_lambda else mu

    to_mu = to_lambda

    def mu_of_x(self, xs) -> np.ndarray:
        """The locus ``mu(x) = -f1(x)/g1(x)`` in float64."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return -self.f1.evalf(xs) / self.g1.evalf(xs)


@dataclass(frozen=True)
class PoleZeroSet:
    poles: RootSet
    zeros: RootSet

    def points(self) -> list[float]:
        return sorted({*self.poles.values, *self.zeros.values})


@dataclass(frozen=True)
class SignRegion:
    lo: float
    hi: float
    mu_sign: int
    count_above: int

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi


@dataclass(frozen=True)
class Asymptotes:
    vertical: float | None
    horizontal: tuple[float, ...]


@dataclass(frozen=True)
class Endpoint:
    kind: str
    param: float
    x: float


@dataclass(eq=False)
class Branch:
    id: str
    param: np.ndarray
    x: np.ndarray
    slope_sign: int
    start: Endpoint
    end: Endpoint
    stability: str | None = None

    def __eq__(self, other):
        if not isinstance(other, Branch):
            return NotImplemented
        return (
            self.id == other.id
            and self.slope_sign == other.slope_sign
            and self.start == other.start
            and self.end == other.end
            and self.stability == other.stability
            and np.array_equal(self.param, other.param)
            and np.array_equal(self.x, other.x)
        )

    def __len__(self) -> int:
        return len(self.x)

    @property
    def param_range(self) -> tuple[float, float]:
        return float(np.min(self.param)), float(np.max(self.param))

    def flipped(self) -> Branch:
        return replace(
            self,
            param=negate(self.param),
            slope_sign=-self.slope_sign,
            start=replace(self.start, param=negate(self.start.param)),
            end=replace(self.end, param=negate(self.end.param)),
        )

    def interpolate(self, params) -> np.ndarray:
        """x on this branch at each horizontal coordinate; NaN outside its range."""
        params = np.asarray(params, dtype=float)
        if self.slope_sign == 0:
            return np.full(params.shape, np.nan)
        p, x = self.param, self.x
        if p[0] > p[-1]:
            p, x = p[::-1], x[::-1]
        out = np.interp(params, p, x)
        out[(params < p[0]) | (params > p[-1])] = np.nan
        return out


@dataclass(frozen=True)
class ConstantSegment:
    lo: float
    hi: float
    stability: str | None = None


@dataclass(frozen=True)
class ConstantBranch:
    """A root of the common factor ``h``: an equilibrium for every parameter value."""

    id: str
    x: float
    multiplicity: int
    segments: tuple[ConstantSegment, ...] = ()

    def label_at(self, param: float) -> str | None:
        for seg in self.segments:
            if seg.lo <= param <= seg.hi:
                return seg.stability
        return None

    def flipped(self) -> ConstantBranch:
        segs = tuple(
            ConstantSegment(negate(s.hi), negate(s.lo), s.stability)
            for s in reversed(self.segments)
        )
        return replace(self, segments=segs)


@dataclass(frozen=True)
class BifurcationPoint:
    param: float
    x: float
    kind: str  # fold, transcritical, pitchfork or degenerate
    branches: tuple[str, ...] = ()


class ColumnEntry(NamedTuple):
    x: float
    multiplicity: int
    source: str
    stability: str | None


@dataclass
class Diagram:
    system: ParamAffineSystem
    decomposition: Decomposition
    poles_zeros: PoleZeroSet
    sign_regions: tuple[SignRegion, ...]
    asymptotes: Asymptotes
    branches: list[Branch]
    constant_branches: list[ConstantBranch]
    bifurcations: list[BifurcationPoint]
    x_window: tuple[float, float]
    param_window: tuple[float, float]
    horizontal: str = "lambda"
    domain_min: float | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def x_height(self) -> float:
        return self.x_window[1] - self.x_window[0]

    def columns(self, params, refine: bool = True) -> list[list[ColumnEntry]]:
        """All equilibria of the diagram on each vertical line, sorted by x descending.

        Branch crossings are found by linear interpolation between samples and,
        with ``refine``, polished by Newton steps on the exact locus kept inside
        the bracketing pair of samples.
        """
        params = np.asarray(params, dtype=float)
        cols: list[list[ColumnEntry]] = [[] for _ in range(len(params))]
        for b in self.branches:
            xs = b.interpolate(params)
            if refine:
                xs = self._polish(b, params, xs)
            for i in np.flatnonzero(~np.isnan(xs)):
                cols[i].append(ColumnEntry(float(xs[i]), 1, b.id, b.stability))
        lo, hi = self.param_window
        for c in self.constant_branches:
            for i, p in enumerate(params):
                if lo <= p <= hi:
                    cols[i].append(ColumnEntry(c.x, c.multiplicity, c.id, c.label_at(p)))
        for col in cols:
            col.sort(key=lambda e: (-e.x, e.source))
        return cols

    def column(self, param: float, refine: bool = True) -> list[ColumnEntry]:
        return self.columns([param], refine)[0]

    def _polish(self, b: Branch, params: np.ndarray, xs: np.ndarray) -> np.ndarray:
        ok = ~np.isnan(xs)
        if not ok.any() or b.slope_sign == 0 or len(b) < 2:
            return xs
        p, x = b.param, b.x
        if p[0] > p[-1]:
            p, x = p[::-1], x[::-1]
        q = params[ok]
        k = np.clip(np.searchsorted(p, q), 1, len(p) - 1)
        lo = np.minimum(x[k - 1], x[k])
        hi = np.maximum(x[k - 1], x[k])
        d = self.decomposition
        mu = d.to_mu(q) if self.horizontal == "lambda" else q
        f1, g1 = d.f1, d.g1
        df1, dg1 = f1.derivative(), g1.derivative()
        z = xs[ok].copy()
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for _ in range(4):
                step = (f1.evalf(z) + mu * g1.evalf(z)) / (df1.evalf(z) + mu * dg1.evalf(z))
                nz = z - step
                good = np.isfinite(nz) & (nz >= lo) & (nz <= hi)
                z = np.where(good, nz, z)
        out = xs.copy()
        out[ok] = z
        return out

    def branch(self, branch_id: str) -> Branch | ConstantBranch:
        for b in [*self.branches, *self.constant_branches]:
            if b.id == branch_id:
                return b
        raise KeyError(branch_id)
