from .kubota_leopoldt import (
    CONVENTIONS,
    LpSeries,
    audit_window,
    interpolated_character,
    kubota_leopoldt,
    mirror_check,
    mirror_series,
    node_exponent,
)
from .derivatives import derivative_ratio, fd_precision, lp_derivative_fd, xi_prime
from .invariants import invariants

__all__ = [
    "CONVENTIONS",
    "LpSeries",
    "audit_window",
    "interpolated_character",
    "kubota_leopoldt",
    "mirror_check",
    "mirror_series",
    "node_exponent",
    "derivative_ratio",
    "fd_precision",
    "lp_derivative_fd",
    "xi_prime",
    "invariants",
]
