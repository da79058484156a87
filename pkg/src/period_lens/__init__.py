"""Period polynomials of newforms and their zeros on the circle of symmetry.

The package builds the full, even, and odd period polynomials of a newform
from certified critical L-values and counts how many of their zeros lie on
the circle |X| = 1/sqrt(N), by two independent routes: a trigonometric
main-term sign-change engine with explicit error bounds, and a direct
arbitrary-precision root finder.
"""

from .precision import PrecisionPolicy
from .newforms import Newform, NewformError, parse_newform, serialize_newform, generate_level_one
from .lfunction import LValueTable, build_l_table, l_value, l_value_direct, lambda_completed
from .periodpoly import PeriodContext, PeriodPolynomial, build_full, build_even, build_odd, build_q
from .roots import RootSet, all_roots, classify
from .zeros import ZeroVerdict, count_on_circle, endpoint_multiplicity, predicted_count

__version__ = "0.1.0"

__all__ = [
    "PrecisionPolicy",
    "Newform",
    "NewformError",
    "parse_newform",
    "serialize_newform",
    "generate_level_one",
    "LValueTable",
    "build_l_table",
    "l_value",
    "l_value_direct",
    "lambda_completed",
    "PeriodContext",
    "PeriodPolynomial",
    "build_full",
    "build_even",
    "build_odd",
    "build_q",
    "RootSet",
    "all_roots",
    "classify",
    "ZeroVerdict",
    "count_on_circle",
    "endpoint_multiplicity",
    "predicted_count",
    "__version__",
]
