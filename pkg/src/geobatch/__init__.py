"""Batch codes over F2 built from finite geometry.

Information bits are indexed by points of F_q^d; parity checks sum the bits
on affine subspaces (cosets of an L-nice collection, or sampled lines of
the affine plane AG(2, q)).
"""

from geobatch.errors import (
    AssignmentFailure,
    BudgetExceeded,
    DimensionMismatch,
    DivisionByZero,
    GeoBatchError,
    IndexOutOfRange,
    InvalidParams,
    LengthMismatch,
    NotPrimePower,
    UncertifiedCollection,
)
from geobatch.finite_field import Field, field_new

__version__ = "0.1.0"

__all__ = [
    "AssignmentFailure",
    "BudgetExceeded",
    "DimensionMismatch",
    "DivisionByZero",
    "Field",
    "GeoBatchError",
    "IndexOutOfRange",
    "InvalidParams",
    "LengthMismatch",
    "NotPrimePower",
    "UncertifiedCollection",
    "field_new",
]
