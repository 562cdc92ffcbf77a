"""Exact algebra over Q(i): polynomials, rational functions, 1-forms."""

from .gaussian import GaussianRational, format_gaussian
from .parse import format_rational, parse_rational
from .poly import Polynomial, poly_gcd, squarefree_decomposition
from .rational import (
    EPS_POLE,
    INF,
    MeromorphicOneForm,
    PoleResidue,
    RationalFunction,
    antiderivative,
    differentiate,
    evaluate,
    polynomial_roots,
    residue_at,
)

__all__ = [
    "EPS_POLE",
    "INF",
    "GaussianRational",
    "MeromorphicOneForm",
    "PoleResidue",
    "Polynomial",
    "RationalFunction",
    "antiderivative",
    "differentiate",
    "evaluate",
    "format_gaussian",
    "format_rational",
    "parse_rational",
    "poly_gcd",
    "polynomial_roots",
    "residue_at",
    "squarefree_decomposition",
]
