"""
Manin symbols for Gamma_1(M) and the cusps of X_1(M).

A symbol [c:d] stands for g{0, oo} with g in SL_2(Z) of bottom row (c, d) mod M;
the index set is {(c, d) mod M : gcd(c, d, M) = 1} modulo (c, d) ~ (-c, -d).
A cusp x/y is keyed by (y mod M, x mod gcd(y, M)) up to a common sign.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import Rational, divisors, factorint, totient
from sympy.core.intfunc import igcdex
from sympy.ntheory.continued_fraction import continued_fraction_convergents, continued_fraction_iterator

from .errors import InadmissiblePair

Pair = Tuple[int, int]
CuspKey = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class ManinSymbols:
    level: int
    pairs: Tuple[Pair, ...]
    positions: Dict[Pair, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)

    def normalize(self, c: int, d: int) -> Optional[Pair]:
        M = self.level
        c, d = c % M, d % M
        if gcd(gcd(c, d), M) != 1:
            return None
        return min((c, d), ((-c) % M, (-d) % M))

    def find(self, c: int, d: int) -> Optional[int]:
        key = self.normalize(c, d)
        return None if key is None else self.positions[key]

    def index(self, c: int, d: int) -> int:
        i = self.find(c, d)
        if i is None:
            raise InadmissiblePair(f"({c}, {d}) is not a Manin symbol at level {self.level}")
        return i


@lru_cache(maxsize=None)
def manin_symbols(M: int) -> ManinSymbols:
    if M < 3:
        raise ValueError(f"level must be >= 3, got {M}")
    pairs: List[Pair] = []
    for c in range(M):
        for d in range(M):
            if gcd(gcd(c, d), M) != 1:
                continue
            if (c, d) <= ((-c) % M, (-d) % M):
                pairs.append((c, d))
    return ManinSymbols(M, tuple(pairs), {x: i for i, x in enumerate(pairs)})


def lift_to_sl2(c: int, d: int, M: int) -> Tuple[int, int, int, int]:
    """(a, b, c', d') in SL_2(Z) with (c', d') = (c, d) mod M."""
    c, d = c % M, d % M
    if c == 0:
        c = M
    while gcd(c, d) != 1:
        d += M
    x, y, _ = igcdex(d, c)
    return int(x), int(-y), c, d


def zero_to(x: int, y: int) -> List[Pair]:
    """Bottom rows of the unimodular paths summing to {0, x/y}."""
    if y == 0:
        return [(0, 1)]
    q_prev = 0
    rows = [(0, 1)]
    for j, r in enumerate(continued_fraction_convergents(continued_fraction_iterator(Rational(x, y)))):
        q = int(r.q)
        rows.append((q, q_prev if j % 2 else -q_prev))
        q_prev = q
    return rows


# cusps ---------------------------------------------------------------------------

def cusp_key(x: int, y: int, M: int) -> CuspKey:
    y = y % M
    g = gcd(y, M)
    return min((y, x % g), ((-y) % M, (-x) % g))


def symbol_cusps(c: int, d: int, M: int) -> Tuple[CuspKey, CuspKey]:
    """(g oo, g 0) for g of bottom row (c, d): a = d^-1 mod gcd(c, M), b = -c^-1 mod gcd(d, M)."""
    gc, gd = gcd(c, M), gcd(d, M)
    return cusp_key(pow(d, -1, gc), c, M), cusp_key(-pow(c, -1, gd), d, M)


def cusp_diamond(key: CuspKey, e: int, M: int) -> CuspKey:
    y, x = key
    return cusp_key(pow(e, -1, M) * x, e * y, M)


def cusp_star(key: CuspKey, M: int) -> CuspKey:
    y, x = key
    return cusp_key(-x, y, M)


# oracles for X_1(M) ----------------------------------------------------------------

def cusp_count(M: int) -> int:
    if M < 3:
        raise ValueError("level must be >= 3")
    if M == 4:
        return 3
    return sum(int(totient(d)) * int(totient(M // d)) for d in divisors(M)) // 2


def gamma1_index(M: int) -> int:
    """Index of +-Gamma_1(M) in PSL_2(Z), M >= 3."""
    idx = Fraction(M * M, 2)
    for ell in factorint(M):
        idx *= 1 - Fraction(1, ell * ell)
    return int(idx)


def gamma0_index(M: int) -> int:
    idx = Fraction(M)
    for ell in factorint(M):
        idx *= 1 + Fraction(1, ell)
    return int(idx)


def genus(M: int) -> int:
    """Genus of X_1(M): 1 + mu/12 - nu_3/3 - c/2, with nu_2 = 0 and nu_3 = [M = 3]."""
    nu3 = 1 if M == 3 else 0
    g = 1 + Fraction(gamma1_index(M), 12) - Fraction(nu3, 3) - Fraction(cusp_count(M), 2)
    if g.denominator != 1:
        raise ArithmeticError(f"non-integral genus {g} at level {M}")
    return int(g)
