"""Parsing of scalar vector fields that are affine in one parameter.

Grammar (see ``docs/grammar.md``)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | IDENT | "(" expr ")"

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``, and it is
right-associative.  Exponents must reduce to non-negative integer constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from .errors import (
    ExponentError,
    NoParameter,
    NotPolynomialInState,
    ParameterNotAffine,
    ParseError,
    UnknownSymbolError,
)
from .poly import Polynomial

__all__ = [
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "ParamAffineSystem",
    "parse_expression",
    "extract_affine_system",
    "parse_system",
    "evaluate",
    "expand",
    "to_text",
    "MAX_EXPONENT",
]

MAX_EXPONENT = 512

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()])"
    r")"
)


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Sym:
    name: str
    role: str  # "state" or "param"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * ^
    left: object
    right: object
    pos: int = field(default=0, compare=False)


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        i = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, state: str, param: str | None):
        self.text = text
        self.state = state
        self.param = param
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val or 'end of input'!r}", pos, self.text)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            if kind in ("ident", "num") or (kind == "op" and val == "("):
                raise ParseError(
                    f"unexpected {val!r}; implicit multiplication is not supported, use '*'",
                    pos, self.text)
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term(), pos)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                node = BinOp("*", node, self.unary(), pos)
            else:
                return node

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary(), pos)
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            exp_pos = self.peek()[2]
            exponent = self.unary()
            _check_exponent(exponent, exp_pos, self.text)
            return BinOp("^", base, exponent, pos)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            try:
                return Num(Fraction(Decimal(val)), pos)
            except InvalidOperation:  # pragma: no cover - regex admits only valid literals
                raise ParseError(f"bad number {val!r}", pos, self.text)
        if kind == "ident":
            if val == self.state:
                return Sym(val, "state", pos)
            if val == self.param:
                return Sym(val, "param", pos)
            raise UnknownSymbolError(f"unknown symbol {val!r}", pos, self.text)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"expected a number, symbol or '(', found {val or 'end of input'!r}",
                         pos, self.text)


def _has_symbol(node) -> bool:
    if isinstance(node, Sym):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _has_symbol(node.operand)
    return _has_symbol(node.left) or _has_symbol(node.right)


def _check_exponent(node, pos, text):
    # symbolic exponents are left for extract_affine_system to reject
    if _has_symbol(node):
        return
    value = evaluate(node, 0, 0)
    if value.denominator != 1:
        raise ExponentError(f"exponent {value} is not an integer", pos, text)
    if value < 0:
        raise ExponentError(f"exponent {value} is negative", pos, text)
    if value > MAX_EXPONENT:
        raise ExponentError(f"exponent {value} exceeds {MAX_EXPONENT}", pos, text)


def parse_expression(text: str, state: str = "x", param: str | None = "lambda"):
    """Parse ``text`` into an AST over one state symbol and one parameter symbol."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, text)
    if state == param:
        raise ValueError("state and parameter symbols must differ")
    return _Parser(text, state, param).parse()


def evaluate(node, x, lam) -> Fraction:
    """Exact evaluation of an AST at rational ``x`` and parameter ``lam``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Sym):
        return Fraction(x) if node.role == "state" else Fraction(lam)
    if isinstance(node, Neg):
        return -evaluate(node.operand, x, lam)
    a = evaluate(node.left, x, lam)
    b = evaluate(node.right, x, lam)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b.denominator != 1 or b < 0:
        raise ExponentError(f"exponent {b} is not a non-negative integer")
    return a ** int(b)


# bivariate polynomial as {(power of x, power of param): coefficient}


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for (i, j), a in p.items():
        for (k, m), b in q.items():
            key = (i + k, j + m)
            out[key] = out.get(key, 0) + a * b
    return {k: v for k, v in out.items() if v != 0}


def _add(p: dict, q: dict, sign=1) -> dict:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v != 0}


def expand(node) -> dict[tuple[int, int], Fraction]:
    """Expand an AST into ``{(x power, parameter power): coefficient}``."""
    if isinstance(node, Num):
        return {(0, 0): node.value} if node.value != 0 else {}
    if isinstance(node, Sym):
        return {(1, 0): Fraction(1)} if node.role == "state" else {(0, 1): Fraction(1)}
    if isinstance(node, Neg):
        return {k: -v for k, v in expand(node.operand).items()}
    if node.op == "^":
        if _has_symbol(node.right):
            raise NotPolynomialInState("exponents must be integer constants, not symbolic")
        n = int(evaluate(node.right, 0, 0))
        base = expand(node.left)
        result = {(0, 0): Fraction(1)}
        for _ in range(n):
            result = _mul(result, base)
        return result
    left, right = expand(node.left), expand(node.right)
    if node.op == "+":
        return _add(left, right)
    if node.op == "-":
        return _add(left, right, -1)
    return _mul(left, right)


_PREC = {"+": 1, "-": 1, "*": 2, "neg": 3, "^": 4}


def to_text(node, state: str | None = None, param: str | None = None) -> str:
    """Serialise an AST back to the input grammar with minimal parentheses."""

    def prec(n):
        if isinstance(n, BinOp):
            return _PREC[n.op]
        if isinstance(n, Neg):
            return _PREC["neg"]
        return 5

    def wrap(n, need):
        s = go(n)
        return f"({s})" if prec(n) < need else s

    def go(n):
        if isinstance(n, Num):
            v = n.value
            if v.denominator == 1:
                return str(v.numerator)
            # parsed literals are terminating decimals
            num, den = v.numerator, v.denominator
            digits = 0
            while (num * 10**digits) % den:
                digits += 1
                if digits > 4 * den.bit_length():
                    raise ValueError(f"{v} has no terminating decimal form")
            return format(Decimal(num * 10**digits // den).scaleb(-digits), "f")
        if isinstance(n, Sym):
            if n.role == "state" and state:
                return state
            if n.role == "param" and param:
                return param
            return n.name
        if isinstance(n, Neg):
            return "-" + wrap(n.operand, _PREC["neg"])
        if n.op == "^":
            return f"{wrap(n.left, 5)}^{wrap(n.right, _PREC['neg'])}"
        p = _PREC[n.op]
        # left-assoc: right operand of - needs strictly higher precedence
        right_need = p if n.op == "+" else p + 1
        return f"{wrap(n.left, p)} {n.op} {wrap(n.right, right_need)}"

    return go(node)


@dataclass(frozen=True)
class ParamAffineSystem:
    """The vector field ``f(x) + param * g(x)``."""

    state: str
    param: str
    f: Polynomial
    g: Polynomial
    source: str = field(default="", compare=False)

    def instantiate(self, lam) -> Polynomial:
        """The polynomial ``f + lam*g`` in the state variable, exact for rational ``lam``."""
        return self.f + self.g * lam

    def __call__(self, x, lam):
        return self.f(x) + lam * self.g(x)

    def derivative_at(self, x: float, lam: float) -> float:
        return self.f.derivative()(x) + lam * self.g.derivative()(x)

    def residual_scale(self, x, lam) -> float:
        """Sum of |c_i(lam) x^i| over the coefficients of ``f + lam*g``."""
        return self.instantiate(lam).term_scale(x)

    def to_text(self) -> str:
        f = self.f.to_text(self.state)
        g = self.g.to_text(self.state)
        return f"({f}) + {self.param}*({g})"


def extract_affine_system(ast, state: str | None = None, param: str | None = None,
                          source: str = "") -> ParamAffineSystem:
    """Split an AST into ``f`` (parameter-free part) and ``g`` (parameter coefficient)."""
    names = _symbol_names(ast)
    state = state or names.get("state", "x")
    param = param or names.get("param", "lambda")
    terms = expand(ast)
    if any(j >= 2 for (_, j) in terms):
        top = max(j for (_, j) in terms)
        raise ParameterNotAffine(
            f"parameter {param!r} appears with power {top}; the system must be affine in it")
    deg = max((i for (i, _) in terms), default=0)
    f = Polynomial(terms.get((i, 0), 0) for i in range(deg + 1))
    g = Polynomial(terms.get((i, 1), 0) for i in range(deg + 1))
    if g.is_zero():
        raise NoParameter(f"parameter {param!r} does not appear after expansion")
    return ParamAffineSystem(state, param, f, g, source)


def _symbol_names(node, out=None) -> dict:
    out = {} if out is None else out
    if isinstance(node, Sym):
        out.setdefault(node.role, node.name)
    elif isinstance(node, Neg):
        _symbol_names(node.operand, out)
    elif isinstance(node, BinOp):
        _symbol_names(node.left, out)
        _symbol_names(node.right, out)
    return out


def parse_system(text: str, state: str = "x", param: str = "lambda",
                 multiply_state: bool = False) -> ParamAffineSystem:
    """Parse and extract in one step.

    ``multiply_state`` multiplies the whole expression by the state symbol, so
    a radial equation ``r' = r*[...]`` can be entered as the bracket contents.
    """
    ast = parse_expression(text, state, param)
    if multiply_state:
        ast = BinOp("*", Sym(state, "state"), ast)
    return extract_affine_system(ast, state, param, source=text)
