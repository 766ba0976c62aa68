"""
(c, d)-symbols and the formal image of symbols as pairs of cyclotomic units.

cd[u:v] = c^2 d^2 [u:v] - c^2 [u:dv] - d^2 [cu:v] + [cu:dv]

The formal image sends [u:v] to the pair (u, v) standing for
(1 - zeta_M^u, 1 - zeta_M^v); pairs are normalized modulo (u, v) ~ -(v, u) and
nothing else, so (u, u) vanishes.
"""
from math import gcd
from typing import Dict, List, Tuple

from src.padic.ring import Raw

from .errors import InadmissiblePair, ZeroIndex
from .manin import Pair
from .space import SymbolSpace

Formal = Dict[Pair, int]


def cd_combination(M: int, c: int, d: int, u: int, v: int) -> Formal:
    bad = 6 * M
    if c <= 1 or d <= 1 or gcd(c, bad) != 1 or gcd(d, bad) != 1:
        raise InadmissiblePair(f"(c, d) = ({c}, {d}) must exceed 1 and be prime to 6*{M}")
    if gcd(gcd(u, v), M) != 1:
        raise InadmissiblePair(f"[{u}:{v}] is not a Manin symbol at level {M}")
    terms: Formal = {}
    for pair, k in (((u, v), c * c * d * d), ((u, d * v), -c * c), ((c * u, v), -d * d), ((c * u, d * v), 1)):
        key = (pair[0] % M, pair[1] % M)
        terms[key] = terms.get(key, 0) + k
    return {k: x for k, x in terms.items() if x}


def cd_symbol(space: SymbolSpace, c: int, d: int, u: int, v: int) -> List[Raw]:
    return space.combination(cd_combination(space.level, c, d, u, v))


def _antisymmetric(u: int, v: int) -> Tuple[Pair, int]:
    if (u, v) <= (v, u):
        return (u, v), 1
    return (v, u), -1


def varpi_formal(space: SymbolSpace, element: Formal) -> Formal:
    """Formal Z-combination of pairs (u, v) mod M for a combination of symbols with u, v != 0."""
    M = space.level
    out: Formal = {}
    for (u, v), k in element.items():
        u, v = u % M, v % M
        if u == 0 or v == 0:
            raise ZeroIndex(f"[{u}:{v}] has a zero index at level {M}")
        if gcd(gcd(u, v), M) != 1:
            raise InadmissiblePair(f"[{u}:{v}] is not a Manin symbol at level {M}")
        if u == v:
            continue
        key, sign = _antisymmetric(u, v)
        out[key] = out.get(key, 0) + sign * k
    return {key: k for key, k in sorted(out.items()) if k}
