"""
Derivative objects of xi.

xi^(1)(X) = (1 + X) xi'(X) satisfies d/ds xi(t^s - 1) = log(t) * xi^(1)(t^s - 1), so the
finite difference of L-values in s divided by xi^(1) at the same node reproduces
log t. The finite difference uses exact L-values only, never the series.
"""
from typing import Any, Dict

from loguru import logger

from src.characters.lvalues import lp_value
from src.padic.errors import NonDivisible, NonUnitInverse, PrecisionExhausted
from src.padic.ring import ExtScalar
from src.series.calculus import xi_n
from src.series.power_series import PowerSeries

from .kubota_leopoldt import LpSeries


def xi_prime(xi: LpSeries) -> PowerSeries:
    return xi_n(xi.series, 1)


def _exponent_to_k(xi: LpSeries, e: int) -> int:
    return 2 - e if xi.convention == "main" else e


def lp_derivative_fd(xi: LpSeries, s: int, h_exponent: int) -> ExtScalar:
    """
    (xi(t^(s + p^h) - 1) - xi(t^s - 1)) / p^h from exact L-values of xi.character.
    Both nodes must carry L-values at non-positive integers.
    """
    if h_exponent < 0:
        raise ValueError("h_exponent must be >= 0")
    step = xi.p ** h_exponent
    k0, k1 = _exponent_to_k(xi, s), _exponent_to_k(xi, s + step)
    if min(k0, k1) < 1:
        raise ValueError(f"s={s} with step {step} leaves the range of interpolation nodes")
    ring = xi.interpolation.ring
    diff = lp_value(xi.character, k1, ring, xi.omega) - lp_value(xi.character, k0, ring, xi.omega)
    try:
        out = diff.divide_by_p(h_exponent)
    except NonDivisible as exc:
        raise PrecisionExhausted(f"finite difference at s={s} is not divisible by p^{h_exponent}") from exc
    logger.bind(event="lp_derivative_fd", s=s, h=h_exponent).debug(f"precision={out.precision}")
    return out


def fd_precision(h_exponent: int) -> int:
    """The finite difference matches log(t) xi^(1) modulo p^(h + 2) (p odd)."""
    return h_exponent + 2


def derivative_ratio(xi: LpSeries, s: int, h_exponent: int) -> Dict[str, Any]:
    """
    lp_derivative_fd / xi^(1)(t^s - 1) next to log t. The ratio is only reported when
    xi^(1) is a unit at the node; the product form is always checked.
    """
    fd = lp_derivative_fd(xi, s, h_exponent)
    at_node = xi_prime(xi).eval_at_ts(s, xi.generator)
    log_t = xi.generator.log()
    product = at_node * log_t
    prec = min(fd.precision, product.precision, fd_precision(h_exponent))
    out: Dict[str, Any] = {
        "s": s,
        "h": h_exponent,
        "precision": prec,
        "ok": fd.agrees(product, prec),
        "log_t": str(log_t.value),
        "ratio": None,
    }
    try:
        ratio = fd / at_node
        out["ratio"] = ratio.to_json()
        ratio_prec = min(ratio.precision, prec - at_node.valuation())
        if ratio_prec > 0:
            out["ratio_matches_log_t"] = ratio.agrees(log_t, ratio_prec)
    except (NonUnitInverse, NonDivisible):
        pass
    return out
