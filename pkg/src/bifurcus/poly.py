"""Exact univariate polynomials over the rationals, with certified real-root isolation.

Coefficients are :class:`fractions.Fraction` stored in ascending order of
power.  Real roots are isolated with Sturm sequences on the square-free parts
and then refined by sign-change bisection, all evaluated exactly in integer
arithmetic, before a last floating-point Newton step.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Polynomial",
    "RealRoot",
    "RootSet",
    "as_fraction",
    "gcd",
    "square_free_factorization",
    "sturm_sequence",
    "real_roots",
    "ROOT_TOL",
    "CLUSTER_TOL",
]

ROOT_TOL = 1e-12
CLUSTER_TOL = 1e-8


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Floats are converted from their exact binary value, strings and Decimals
    from their exact decimal value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(Decimal(value)) if "/" not in value else Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class Polynomial:
    """Immutable polynomial with exact rational coefficients.

    >>> p = Polynomial([0, -1, 0, 1])      # x^3 - x
    >>> p.derivative()
    Polynomial('3*x^2 - 1')
    >>> p(2)
    Fraction(6, 1)
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # construction helpers

    @classmethod
    def x(cls) -> Polynomial:
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> Polynomial:
        p = cls([1])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    # basic properties

    @property
    def degree(self):
        """Degree of the polynomial; ``-math.inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, i: int) -> Fraction:
        if i < 0:
            raise IndexError("negative power")
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # arithmetic

    @staticmethod
    def _coerce(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            return Polynomial(c * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple[Polynomial, Polynomial]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead = other.lead
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            quot[k - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other) -> Polynomial:
        return divmod(self, other)[1]

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    # evaluation

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction input, float otherwise."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = float(x)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def evalf(self, xs) -> np.ndarray:
        """Vectorised float64 evaluation."""
        xs = np.asarray(xs, dtype=float)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = acc * xs + float(c)
        return acc

    def term_scale(self, x) -> float:
        """Sum of |c_i x^i|, the natural magnitude against which residuals are judged."""
        x = abs(float(x))
        return sum(abs(float(c)) * x**i for i, c in enumerate(self.coeffs))

    def integer_coeffs(self) -> list[int]:
        """Coefficients scaled by a positive integer so that all are integers."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.coeffs]

    # text

    def to_text(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mag_s = str(mag) if mag.denominator == 1 else f"({mag})"
            if i == 0:
                body = mag_s
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag_s}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()


# integer coefficient lists (ascending), used for fast exact work


def _ip_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _ip_primitive(a: list[int]) -> list[int]:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    if g > 1:
        a = [c // g for c in a]
    return a


def _ip_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of ``|lc(b)|**delta * a`` by ``b``."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    slc = abs(lc)
    sign = 1 if lc > 0 else -1
    while len(a) - 1 >= db and a:
        k = len(a) - 1
        c = a[-1]
        # a <- |lc|*a - sign*c*x^(k-db)*b ; leading term cancels
        a = [slc * v for v in a]
        shift = k - db
        for j, bj in enumerate(b):
            a[shift + j] -= sign * c * bj
        _ip_trim(a)
    return a


def _ip_gcd(a: list[int], b: list[int]) -> list[int]:
    a = _ip_primitive(_ip_trim(list(a)))
    b = _ip_primitive(_ip_trim(list(b)))
    while b:
        a, b = b, _ip_primitive(_ip_prem(a, b))
    return a


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor over the rationals."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    return Polynomial(_ip_gcd(p.integer_coeffs(), q.integer_coeffs())).monic()


def square_free_factorization(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: ``monic(p) == prod(f**e for f, e in result)``.

    Factors are monic, square-free and pairwise coprime; constant factors are
    omitted.
    """
    if p.is_zero():
        raise ValueError("square-free factorization of the zero polynomial")
    p = p.monic()
    if p.is_constant():
        return []
    dp = p.derivative()
    a = gcd(p, dp)
    if a.is_constant():
        return [(p, 1)]
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    i = 1
    while not b.is_constant():
        a = gcd(b, d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if not a.is_constant():
            out.append((a, i))
        i += 1
    return out


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of ``p``, each member scaled by a positive constant.

    Positive scaling leaves sign variation counts unchanged, so the chain is
    built with integer pseudo-remainders instead of rational division.
    """
    return [Polynomial(q) for q in _int_sturm(p.integer_coeffs())]


def _int_sturm(ints: list[int]) -> list[list[int]]:
    p0 = _ip_primitive(list(ints))
    p1 = _ip_primitive(_ip_trim([i * c for i, c in enumerate(p0)][1:]))
    seq = [p0]
    if p1:
        seq.append(p1)
    while len(seq) >= 2:
        r = _ip_prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_ip_primitive([-c for c in r]))
    return seq


class RealRoot(NamedTuple):
    value: float
    multiplicity: int
    # certified bracket lo <= root <= hi; lo == hi when the root was hit exactly
    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None


class RootSet(tuple):
    """Real roots sorted ascending, each with its multiplicity."""

    @property
    def values(self) -> list[float]:
        return [r.value for r in self]

    @property
    def multiplicities(self) -> list[int]:
        return [r.multiplicity for r in self]

    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self)

    def as_pairs(self) -> list[tuple[float, int]]:
        return [(r.value, r.multiplicity) for r in self]

    def __repr__(self) -> str:
        inner = ", ".join(f"{r.value:.12g}:{r.multiplicity}" for r in self)
        return f"RootSet({{{inner}}})"


# exact sign evaluation at dyadic points n / 2**k


def _sign_dyadic(ints: Sequence[int], n: int, k: int) -> int:
    # homogeneous Horner: sum c_i n^i 2^(k(d-i)) has the sign of p(n/2^k)
    acc = ints[-1]
    shift = 0
    for c in reversed(ints[:-1]):
        shift += k
        acc = acc * n + (c << shift)
    return (acc > 0) - (acc < 0)


def _variations(signs: Iterable[int]) -> int:
    count = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


class _Sturm:
    def __init__(self, ints: list[int]):
        self.seq = _int_sturm(ints)

    def at(self, n: int, k: int) -> int:
        return _variations(_sign_dyadic(q, n, k) for q in self.seq)


def _cauchy_exponent(p: Polynomial) -> int:
    """Smallest e with every real root strictly inside (-2**e, 2**e)."""
    lead = abs(p.lead)
    m = max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))
    e = 0
    while (1 << e) < 2 * (1 + m):
        e += 1
    return e


def _isolate(sturm: _Sturm, e: int) -> list[tuple[int, int, int]]:
    """Dyadic intervals (a/2^k, b/2^k] each holding exactly one root."""
    out = []
    lo, hi, k = -(1 << e), 1 << e, 0
    stack = [(lo, hi, k, sturm.at(lo, k), sturm.at(hi, k))]
    while stack:
        a, b, k, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append((a, b, k))
            continue
        a, b, k = 2 * a, 2 * b, k + 1
        m = (a + b) // 2
        vm = sturm.at(m, k)
        stack.append((m, b, k, vm, vb))
        stack.append((a, m, k, va, vm))
    return out


def _refine(ints: list[int], sturm: _Sturm, a: int, b: int, k: int,
            tol: float) -> tuple[Fraction, Fraction]:
    if _sign_dyadic(ints, b, k) == 0:
        r = Fraction(b, 1 << k)
        return r, r
    sa = _sign_dyadic(ints, a, k)
    while sa == 0:
        # a is the neighbouring root; pull it inward with Sturm counts
        a, b, k = 2 * a, 2 * b, k + 1
        m = (a + b) // 2
        sm = _sign_dyadic(ints, m, k)
        if sm == 0:
            r = Fraction(m, 1 << k)
            return r, r
        if sturm.at(a, k) - sturm.at(m, k) == 1:
            b = m
        else:
            a, sa = m, sm
    while math.ldexp(b - a, -k) > tol:
        a, b, k = 2 * a, 2 * b, k + 1
        m = (a + b) // 2
        sm = _sign_dyadic(ints, m, k)
        if sm == 0:
            r = Fraction(m, 1 << k)
            return r, r
        if sm == sa:
            a = m
        else:
            b = m
    return Fraction(a, 1 << k), Fraction(b, 1 << k)


def _polish(p: Polynomial, dp: Polynomial, a: Fraction, b: Fraction) -> float:
    if a == b:
        return float(a)
    x = float((a + b) / 2)
    d = dp(x)
    if d != 0.0:
        x1 = x - p(x) / d
        if float(a) <= x1 <= float(b):
            return x1
    return x


def real_roots(p: Polynomial, tol: float = ROOT_TOL, cluster: float = CLUSTER_TOL) -> RootSet:
    """All real roots of ``p`` with multiplicities, ascending.

    Roots of different square-free factors closer than ``cluster`` are merged
    into a single root with summed multiplicity.
    """
    if p.is_zero():
        raise ValueError("real roots of the zero polynomial are undefined")
    found: list[RealRoot] = []
    for q, e in square_free_factorization(p):
        ints = _ip_primitive(q.integer_coeffs())
        sturm = _Sturm(ints)
        dq = q.derivative()
        for a, b, k in _isolate(sturm, _cauchy_exponent(q)):
            lo, hi = _refine(ints, sturm, a, b, k, tol)
            found.append(RealRoot(_polish(q, dq, lo, hi), e, lo, hi))
    found.sort(key=lambda r: r.value)
    merged: list[RealRoot] = []
    for r in found:
        if merged and r.value - merged[-1].value < cluster:
            prev = merged[-1]
            keep = prev if prev.multiplicity >= r.multiplicity else r
            merged[-1] = RealRoot(keep.value, prev.multiplicity + r.multiplicity,
                                  min(prev.lo, r.lo), max(prev.hi, r.hi))
        else:
            merged.append(r)
    return RootSet(merged)
