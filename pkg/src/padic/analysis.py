"""
Truncated p-adic logarithm and exponential with an explicit precision ledger.

Both series are summed in a copy of the ring carrying `slack` extra digits so the
divisions by k (log) and k! (exp) never eat into the reported precision.
"""
from typing import Tuple, Union

from .errors import ConvergenceDomain
from .ring import ExtScalar, Raw, UnramifiedRing
from .scalar import PadicScalar, int_valuation, unit_part

Scalar = Union[PadicScalar, ExtScalar]


def _ilog(k: int, p: int) -> int:
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e


def _as_ext(a: Scalar) -> Tuple[ExtScalar, bool]:
    if isinstance(a, PadicScalar):
        return UnramifiedRing.build(a.prime, 1, a.precision).from_padic(a), True
    return a, False


def _back(x: ExtScalar, was_padic: bool) -> Scalar:
    return x.constant() if was_padic else x


def _divide_exact(ring: UnramifiedRing, a: Raw, n: int) -> Raw:
    """a / n for an integer n whose p-part divides a (known mod ring.mod)."""
    v = int_valuation(n, ring.p)
    if v:
        a = ring._divide_by_p(a, v)
    u = unit_part(n, ring.p)
    return ring._scale(a, pow(u, -1, ring.mod))


def log_terms(p: int, precision: int) -> int:
    """Number of terms K such that x^k/k has valuation >= precision for k >= K when v(x) >= 1."""
    k = max(precision, 1)
    while k - _ilog(k, p) < precision:
        k += 1
    return k


def padic_log(u: Scalar) -> Scalar:
    """log(u) for a 1-unit u, at the precision of u."""
    x, was_padic = _as_ext(u)
    ring, prec = x.ring, x.precision
    one = ring._from_int(1, ring.p ** prec)
    t = ring._sub(x.coeffs, one, ring.p ** prec)
    if ring._val(t, prec) < 1:
        raise ConvergenceDomain(f"log needs a 1-unit, got {u!r}")
    K = log_terms(ring.p, prec)
    work = ring.with_precision(prec + _ilog(K, ring.p))
    t = tuple(c % work.mod for c in t)
    acc = work._zero
    power = work._one
    for k in range(1, K):
        power = work._mul(power, t)
        term = _divide_exact(work, power, k)
        acc = work._add(acc, term) if k % 2 else work._sub(acc, term)
    return _back(ExtScalar(ring, acc, prec), was_padic)


def padic_exp(a: Scalar) -> Scalar:
    """exp(a) for v(a) >= 1 (p odd), at the precision of a."""
    x, was_padic = _as_ext(a)
    ring, prec = x.ring, x.precision
    if ring._val(x.coeffs, prec) < 1:
        raise ConvergenceDomain(f"exp needs v(x) > 1/(p-1), got {a!r}")
    p = ring.p
    K = -(-prec * (p - 1) // (p - 2)) if p > 2 else 2 * prec
    slack = sum(K // p ** e for e in range(1, _ilog(K, p) + 1))
    work = ring.with_precision(prec + slack + 1)
    t = tuple(c % work.mod for c in x.coeffs)
    acc = work._one
    power = work._one
    fact = 1
    for k in range(1, K):
        power = work._mul(power, t)
        fact *= k
        acc = work._add(acc, _divide_exact(work, power, fact))
    return _back(ExtScalar(ring, acc, prec), was_padic)


def log_unit(u: Scalar) -> Scalar:
    """Iwasawa-style log of any unit: log(u^(q-1))/(q-1), which kills the torsion part."""
    x, was_padic = _as_ext(u)
    if not x.is_unit():
        raise ConvergenceDomain(f"log_unit needs a unit, got {u!r}")
    q = x.ring.q
    y = padic_log(x ** (q - 1))
    return _back(y / (q - 1), was_padic)
