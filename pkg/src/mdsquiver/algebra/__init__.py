"""Exact polynomial algebra over the rationals: rings, orders, Gröbner bases, ideals."""

from .groebner import Budget, BudgetExceeded, groebner_basis, normal_form, s_polynomial
from .ideal import (
    Ideal,
    colon_iteration,
    eliminate,
    ideal_equal,
    intersect,
    quotient,
    radical_member,
    saturate,
    saturate_by_primes,
    saturate_ideal,
)
from .linalg import integer_kernel, linear_kernel
from .orders import MonomialOrder
from .parser import PolynomialSyntaxError, parse_polynomial
from .polynomial import Poly, Ring
