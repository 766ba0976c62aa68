"""
Exact Bernoulli numbers (B_1 = -1/2), Bernoulli polynomials and the generalized
Bernoulli numbers B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f).
"""
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional
import threading

from loguru import logger

from src.audit.store import CacheStore
from src.padic.errors import NonDivisible, NonIntegral
from src.padic.ring import ExtScalar, UnramifiedRing
from src.padic.scalar import int_valuation
from src.settings import get_settings

from .dirichlet import DirichletCharacter
from .errors import BoundExceeded

_TABLE: List[Fraction] = []
_STORE: Optional[CacheStore] = None
_lock = threading.Lock()


def use_store(store: Optional[CacheStore]) -> None:
    """Back the Bernoulli table with an on-disk cache (None disables it)."""
    global _STORE
    with _lock:
        _STORE = store
        if store is None:
            return
        cached = store.load_bernoulli()
        k = len(_TABLE)
        while k in cached:
            _TABLE.append(cached[k])
            k += 1


def _extend(n: int) -> None:
    # Akiyama-Tanigawa yields B_1 = +1/2; the sign is flipped on the way out
    start = len(_TABLE)
    A = [Fraction(0)] * (n + 1)
    fresh: Dict[int, Fraction] = {}
    for m in range(n + 1):
        A[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            A[j - 1] = j * (A[j - 1] - A[j])
        if m >= start:
            b = -A[0] if m == 1 else A[0]
            _TABLE.append(b)
            fresh[m] = b
    if _STORE is not None and fresh:
        _STORE.save_bernoulli(fresh)
    logger.bind(event="bernoulli_extend").debug(f"table extended to B_{n}")


def bernoulli_numbers(n: int, bound: Optional[int] = None) -> List[Fraction]:
    """B_0, ..., B_n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    bound = get_settings().bernoulli_bound if bound is None else bound
    if n > bound:
        raise BoundExceeded(f"B_{n} exceeds the configured bound {bound}")
    with _lock:
        if len(_TABLE) <= n:
            _extend(n)
        return _TABLE[: n + 1]


def bernoulli_number(k: int, bound: Optional[int] = None) -> Fraction:
    return bernoulli_numbers(k, bound)[k]


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    x = Fraction(x)
    B = bernoulli_numbers(k)
    return sum((comb(k, j) * B[j] * x ** (k - j) for j in range(k + 1)), Fraction(0))


def generalized_bernoulli_exact(n: int, chi: DirichletCharacter) -> Dict[int, Fraction]:
    """B_{n,chi} as {k: c_k} meaning sum_k c_k zeta_order^k."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: Dict[int, Fraction] = {}
    if chi.parity != (-1) ** n and not (n == 1 and chi.is_trivial()):
        return out
    f = chi.modulus
    scale = Fraction(f) ** (n - 1)
    for a in range(1, f + 1):
        k = chi.table[a % f]
        if k is None:
            continue
        out[k] = out.get(k, Fraction(0)) + bernoulli_poly(n, Fraction(a, f))
    return {k: c * scale for k, c in out.items() if c}


def exact_to_ring(exact: Dict[int, Fraction], order: int, ring: UnramifiedRing) -> ExtScalar:
    """Reduce sum_k c_k zeta_order^k into the ring at its precision."""
    p = ring.p
    v = max([int_valuation(c.denominator, p) for c in exact.values()] + [0])
    work = ring.with_precision(ring.precision + v)
    acc = work.zero()
    for k, c in sorted(exact.items()):
        acc = acc + work.from_fraction(c * p ** v) * work.root_of_unity(order, k)
    try:
        acc = acc.divide_by_p(v)
    except NonDivisible as exc:
        raise NonIntegral(f"value has a {p}-power denominator") from exc
    return acc.lift_to(ring)


def generalized_bernoulli(n: int, chi: DirichletCharacter, ring: UnramifiedRing) -> ExtScalar:
    return exact_to_ring(generalized_bernoulli_exact(n, chi), chi.order, ring)
