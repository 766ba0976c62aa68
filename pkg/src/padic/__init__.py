from .errors import (
    ArithmeticFault,
    ConvergenceDomain,
    Indeterminate,
    NonDivisible,
    NonIntegral,
    NonUnit,
    NonUnitInverse,
    PrecisionExhausted,
    RingMismatch,
)
from .scalar import PadicScalar, teichmuller
from .ring import UnramifiedRing, ExtScalar
from .ramified import RamifiedRing, RamifiedScalar
from .analysis import padic_log, padic_exp, log_unit

__all__ = [
    "ArithmeticFault",
    "ConvergenceDomain",
    "Indeterminate",
    "NonDivisible",
    "NonIntegral",
    "NonUnit",
    "NonUnitInverse",
    "PrecisionExhausted",
    "RingMismatch",
    "PadicScalar",
    "teichmuller",
    "UnramifiedRing",
    "ExtScalar",
    "RamifiedRing",
    "RamifiedScalar",
    "padic_log",
    "padic_exp",
    "log_unit",
]
