from .power_series import PowerSeries
from .generator import Generator
from .biseries import BiSeries
from .weierstrass import WeierstrassData, weierstrass_data, invariants
from .newton import Interpolation, interpolate, working_precision
from .calculus import (
    diagonalize,
    xi_n,
    tilde_xi_1,
    expansion_by_xi,
    diagonal_identity_holds,
    derivative_identity_holds,
    diagonal_kernel_check,
)

__all__ = [
    "PowerSeries",
    "Generator",
    "BiSeries",
    "WeierstrassData",
    "weierstrass_data",
    "invariants",
    "Interpolation",
    "interpolate",
    "working_precision",
    "diagonalize",
    "xi_n",
    "tilde_xi_1",
    "expansion_by_xi",
    "diagonal_identity_holds",
    "derivative_identity_holds",
    "diagonal_kernel_check",
]
