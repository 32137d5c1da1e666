import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bifurcus.errors import (
    ExponentError,
    NoParameter,
    NotPolynomialInState,
    ParameterNotAffine,
    ParseError,
    UnknownSymbolError,
)
from bifurcus.expr import (
    BinOp,
    Neg,
    Num,
    Sym,
    evaluate,
    expand,
    extract_affine_system,
    parse_expression,
    parse_system,
    to_text,
)
from bifurcus.poly import Polynomial

X = Polynomial.x()


def test_examples():
    s = parse_system("lambda*x - x^3")
    assert (s.f, s.g) == (-(X**3), X)
    s = parse_system("c + (1+2*c)*x - x^3", param="c")
    assert (s.f, s.g) == (X - X**3, 2 * X + 1)
    assert parse_expression("0") == Num(Fraction(0))


def test_precedence_and_associativity():
    assert parse_expression("-x^2") == Neg(BinOp("^", Sym("x", "state"), Num(Fraction(2))))
    assert evaluate(parse_expression("2^3^2"), 0, 0) == 512
    assert evaluate(parse_expression("10 - 4 - 3"), 0, 0) == 3
    assert evaluate(parse_expression("2*3 + 4*5"), 0, 0) == 26
    assert evaluate(parse_expression("-2^2"), 0, 0) == -4
    assert evaluate(parse_expression("(-2)^2"), 0, 0) == 4
    assert evaluate(parse_expression("x^(1+1)"), 3, 0) == 9


def test_decimals_are_exact():
    s = parse_system("0.1*lambda + x")
    assert s.g == Polynomial([Fraction(1, 10)])
    assert parse_system("1e-3*lambda*x").g == Polynomial([0, Fraction(1, 1000)])


def test_multiply_state():
    s = parse_system("lambda - lambda*r^2 + r^4", state="r", multiply_state=True)
    assert s.f == X**5
    assert s.g == X - X**3


@pytest.mark.parametrize(
    "text, error",
    [
        ("lambda^2*x", ParameterNotAffine),
        ("x^2", NoParameter),
        ("x^lambda + lambda", NotPolynomialInState),
        ("x^x + lambda", NotPolynomialInState),
        ("x^-1 + lambda", ExponentError),
        ("x^0.5 + lambda", ExponentError),
        ("x^1000 + lambda", ExponentError),
        ("2x + lambda", ParseError),
        ("y + lambda", UnknownSymbolError),
        ("x + (lambda", ParseError),
        ("x + $", ParseError),
        ("", ParseError),
        ("x +", ParseError),
    ],
)
def test_errors(text, error):
    with pytest.raises(error):
        parse_system(text)


def test_error_position():
    with pytest.raises(ParseError) as info:
        parse_expression("x + y")
    assert info.value.position == 4


def test_parameter_power_accepted_by_parser():
    ast = parse_expression("lambda^2*x")
    with pytest.raises(ParameterNotAffine):
        extract_affine_system(ast, "x", "lambda")


def test_state_equals_param_rejected():
    with pytest.raises(ValueError):
        parse_expression("x", "x", "x")


FIXTURE_TEXTS = [
    ("lambda*x - x^3", "x", "lambda"),
    ("c + (1+2*c)*x - x^3", "x", "c"),
    ("c + (1+0.5*c)*x - x^3", "x", "c"),
    ("r*(lambda - lambda*r^2 + r^4)", "r", "lambda"),
]


@pytest.mark.parametrize("text, state, param", FIXTURE_TEXTS)
def test_round_trip_at_random_rational_points(text, state, param):
    rng = random.Random(text)
    ast = parse_expression(text, state, param)
    s = extract_affine_system(ast, state, param)
    for _ in range(200):
        x0 = Fraction(rng.randint(-999, 999), rng.randint(1, 97))
        l0 = Fraction(rng.randint(-999, 999), rng.randint(1, 97))
        assert evaluate(ast, x0, l0) == s.f(x0) + l0 * s.g(x0)


def _exprs():
    leaves = st.one_of(
        st.integers(0, 9).map(str),
        st.sampled_from(["x", "lambda", "0.5", "2.25"]),
    )

    def extend(children):
        return st.one_of(
            st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"{t[0]} {t[1]} {t[2]}"),
            children.map(lambda c: f"-({c})"),
            children.map(lambda c: f"({c})"),
            st.tuples(children, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
        )

    return st.recursive(leaves, extend, max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(_exprs(), st.fractions(max_denominator=20), st.fractions(max_denominator=20))
def test_serialise_and_reparse(text, x0, l0):
    ast = parse_expression(text)
    again = parse_expression(to_text(ast))
    assert expand(again) == expand(ast)
    assert evaluate(again, x0, l0) == evaluate(ast, x0, l0)
