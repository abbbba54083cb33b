"""Diagram algebras, idempotent covers and Tor computations."""

from ._core import (
    BudgetExceeded,
    DiagtorError,
    InvalidArgument,
    UnsupportedRing,
    basis,
    compare,
    dim,
    is_innermost,
    multiply,
    tor,
    verify,
    verify_cover,
)

__all__ = [
    "BudgetExceeded",
    "DiagtorError",
    "InvalidArgument",
    "UnsupportedRing",
    "basis",
    "compare",
    "dim",
    "is_innermost",
    "multiply",
    "tor",
    "verify",
    "verify_cover",
]
