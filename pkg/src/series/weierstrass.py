"""
Weierstrass preparation f = p^mu * P(X) * U(X) for truncated series.

The input is read through its polynomial representative. The unknown tail
X^n * (...) moves the distinguished polynomial by an amount controlled by
X^n mod P, so the reported precision of P is capped by val(X^n mod P).
"""
from dataclasses import dataclass
from typing import Any, Dict, List

from loguru import logger

from src.padic.errors import Indeterminate
from src.padic.ring import Raw, UnramifiedRing

from .power_series import PowerSeries, _mul_raw, _poly_rem


@dataclass(frozen=True)
class WeierstrassData:
    """
    - mu: p-power content
    - lam: degree of the distinguished polynomial
    - distinguished: monic P with non-leading coefficients divisible by p (coeffs low-to-high, length lam + 1)
    - unit: U with f = p^mu * P * U, known modulo X^(n - lam)
    - precision: absolute precision of P and U after removing p^mu
    """
    mu: int
    lam: int
    distinguished: PowerSeries
    unit: PowerSeries
    precision: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "precision": self.precision,
            "distinguished": self.distinguished.to_json(),
            "unit": self.unit.to_json(),
        }


def _inverse_raw(ring: UnramifiedRing, a: List[Raw], length: int, mod: int) -> List[Raw]:
    a = (list(a) + [ring._zero] * length)[:length]
    inv0 = ring._inv(a[0])
    out = [tuple(x % mod for x in inv0)]
    for k in range(1, length):
        acc = ring._zero
        for i in range(1, k + 1):
            if any(a[i]):
                acc = ring._add(acc, ring._mul(a[i], out[k - i], mod), mod)
        out.append(ring._neg(ring._mul(acc, inv0, mod), mod))
    return out


def weierstrass_data(f: PowerSeries) -> WeierstrassData:
    if f.pole:
        raise ValueError("Weierstrass data of a series with a pole")
    ring, n = f.ring, f.trunc
    mu = f.valuation()
    if mu >= f.precision:
        raise Indeterminate(f"all {n} visible coefficients vanish mod {f.p}^{f.precision}")
    g = f.divide_by_p(mu)
    prec = g.precision
    mod = ring.p ** prec
    lam = next(i for i, c in enumerate(g.coeffs) if ring._is_unit(c))

    if lam == 0:
        one = PowerSeries.one(ring, 1, prec)
        logger.bind(event="weierstrass").debug(f"mu={mu} lambda=0")
        return WeierstrassData(mu, 0, one, g, prec)

    A = list(g.coeffs[:lam])
    B = list(g.coeffs[lam:])
    length = n + lam * (prec + 1)
    binv = _inverse_raw(ring, B, length, mod)
    q = binv
    for _ in range(prec + 1):
        qa = _mul_raw(ring, q, A, len(q), mod)
        shifted = list(qa[lam:])
        shifted[0] = ring._sub(ring._one, shifted[0], mod)
        shifted = [shifted[0]] + [ring._neg(c, mod) for c in shifted[1:]]
        q = list(_mul_raw(ring, binv, shifted, len(shifted), mod))
    low = _mul_raw(ring, q, A, lam, mod)
    P_coeffs = list(low) + [ring._one]
    if any(not all(x % ring.p == 0 for x in c) for c in low):
        raise Indeterminate("distinguished polynomial has a unit non-leading coefficient")

    tail = _poly_rem(ring, [ring._zero] * n + [ring._one], P_coeffs, mod)
    p_prec = min([prec] + [ring._val(c, prec) for c in tail])
    if p_prec <= 0:
        raise Indeterminate(f"X^{n} mod P carries no information at precision {prec}")
    P = PowerSeries(ring, tuple(P_coeffs), p_prec)

    u_full = _inverse_raw(ring, q[:n], n, mod)
    U = PowerSeries(ring, tuple(u_full[: n - lam]), p_prec)
    check = PowerSeries(ring, _mul_raw(ring, P_coeffs, u_full, n, mod), p_prec)
    if not check.agrees(g, p_prec):
        raise Indeterminate("P * U does not reproduce the series at the reported precision")
    logger.bind(event="weierstrass").debug(f"mu={mu} lambda={lam} precision={p_prec}")
    return WeierstrassData(mu, lam, P, U, p_prec)


def invariants(f: PowerSeries) -> Dict[str, int]:
    data = weierstrass_data(f)
    return {"mu": data.mu, "lambda": data.lam, "precision": data.precision}
