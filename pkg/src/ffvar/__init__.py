"""Von Mangoldt functions of Galois representations over F_q[t], their
short-interval variance, and the matching random-matrix integrals."""

__version__ = "0.1.0"

from .gf import FieldSpec, make_field, parse_field
from .polyring import Poly, factorize, parse_poly
from .reps import get_rep, lambda_table, reflect, von_mangoldt

__all__ = [
    "FieldSpec",
    "Poly",
    "factorize",
    "get_rep",
    "lambda_table",
    "make_field",
    "parse_field",
    "parse_poly",
    "reflect",
    "von_mangoldt",
]
