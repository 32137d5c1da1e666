"""Bifurcation diagrams of one-dimensional polynomial systems x' = f(x) + lambda*g(x).

The diagram is built as a real root locus: after removing the common factor
of ``f`` and ``g`` the equilibria lie on the graph of a rational function of
the state, which is traced exactly between its critical points.
"""

from .diagram import (
    DEGENERATE,
    STABLE,
    UNSTABLE,
    BifurcationPoint,
    Branch,
    ConstantBranch,
    Diagram,
)
from .errors import (
    BifurcusError,
    DegenerateColumnError,
    ExpressionError,
    NoParameter,
    NotPolynomialInState,
    ParameterNotAffine,
    ParseError,
)
from .expr import ParamAffineSystem, parse_expression, parse_system
from .oracle import compare, oracle_equilibria
from .pipeline import AnalysisConfig, analyze, build_diagram, max_residual
from .poly import Polynomial, gcd, real_roots, square_free_factorization
from .render import step_trace, to_csv, to_json, to_svg

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "BifurcationPoint",
    "BifurcusError",
    "Branch",
    "ConstantBranch",
    "DEGENERATE",
    "DegenerateColumnError",
    "Diagram",
    "ExpressionError",
    "NoParameter",
    "NotPolynomialInState",
    "ParamAffineSystem",
    "ParameterNotAffine",
    "ParseError",
    "Polynomial",
    "STABLE",
    "UNSTABLE",
    "analyze",
    "build_diagram",
    "compare",
    "gcd",
    "max_residual",
    "oracle_equilibria",
    "parse_expression",
    "parse_system",
    "real_roots",
    "square_free_factorization",
    "step_trace",
    "to_csv",
    "to_json",
    "to_svg",
]
