"""Recursive quadratic and cubic towers of finite fields and the high-order elements they carry."""

from .basefield import Element, FieldSpec, is_nth_power, make_field
from .errors import TowerError
from .factoring import Factorization, factor_integer, is_prime
from .orderengine import (
    BoundReport,
    OrderResult,
    TheoremReport,
    bound_cubic,
    bound_for,
    bound_quadratic,
    group_order_factored,
    multiplicative_order,
    verify_theorem,
)
from .towers import (
    CUBIC,
    QUADRATIC,
    Tower,
    TowerElement,
    build_tower,
    extend,
    find_alpha0,
    find_beta0,
    norm_to,
    relative_norm,
    tower_inv,
    tower_mul,
    tower_pow,
)
from .voloch import crossover_compare, voloch_bound

__all__ = [
    "BoundReport", "CUBIC", "Element", "Factorization", "FieldSpec", "OrderResult", "QUADRATIC",
    "TheoremReport", "Tower", "TowerElement", "TowerError", "bound_cubic", "bound_for", "bound_quadratic",
    "build_tower", "crossover_compare", "extend", "factor_integer", "find_alpha0", "find_beta0",
    "group_order_factored", "is_nth_power", "is_prime", "make_field", "multiplicative_order", "norm_to",
    "relative_norm", "tower_inv", "tower_mul", "tower_pow", "verify_theorem", "voloch_bound",
]
