"""
Dirichlet characters with values in the unramified rings of src.padic.

A character is stored abstractly: for each residue a mod f its value is
zeta_order^k (k = exponent(a) * order), or 0 when gcd(a, f) > 1. Concrete values
come from a ring through ring.root_of_unity(order, k), so products and twists
are exact exponent arithmetic.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import divisors, factorint, primitive_root
from sympy.functions.combinatorial.numbers import jacobi_symbol
from sympy.ntheory.modular import crt

from src.padic.errors import RingMismatch
from src.padic.ring import ExtScalar, UnramifiedRing


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class CharacterGroup:
    """
    (Z/fZ)^x with fixed generators.
    - generators: lifted generators of the cyclic factors
    - orders: their orders
    """
    modulus: int
    generators: Tuple[int, ...]
    orders: Tuple[int, ...]

    @staticmethod
    def of(modulus: int) -> "CharacterGroup":
        return _group(modulus)

    @property
    def exponent(self) -> int:
        e = 1
        for o in self.orders:
            e = _lcm(e, o)
        return e

    @property
    def size(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    def dlog(self, a: int) -> Optional[Tuple[int, ...]]:
        return _dlog_table(self.modulus).get(a % self.modulus)

    def character(self, images: Sequence[int]) -> "DirichletCharacter":
        """Character with chi(g_i) = zeta_{ord_i}^{images_i}."""
        if len(images) != len(self.generators):
            raise ValueError(f"expected {len(self.generators)} generator images, got {len(images)}")
        table = _dlog_table(self.modulus)
        fracs: List[Optional[Fraction]] = [None] * self.modulus
        for a, exps in table.items():
            fracs[a] = sum((Fraction(e * k, o) for e, k, o in zip(exps, images, self.orders)), Fraction(0)) % 1
        return DirichletCharacter.from_fractions(self.modulus, fracs)

    def characters(self) -> Iterator["DirichletCharacter"]:
        for images in product(*(range(o) for o in self.orders)):
            yield self.character(images)


@lru_cache(maxsize=None)
def _group(modulus: int) -> CharacterGroup:
    if modulus < 1:
        raise ValueError("modulus must be positive")
    gens: List[int] = []
    orders: List[int] = []
    for ell, k in sorted(factorint(modulus).items()):
        q = ell ** k
        local: List[Tuple[int, int]] = []
        if ell == 2:
            if k >= 2:
                local.append((q - 1, 2))
            if k >= 3:
                local.append((5, 2 ** (k - 2)))
        else:
            local.append((int(primitive_root(q)), q // ell * (ell - 1)))
        rest = modulus // q
        for g, o in local:
            lifted = g % q if rest == 1 else int(crt([q, rest], [g, 1])[0])
            gens.append(lifted % modulus)
            orders.append(o)
    return CharacterGroup(modulus, tuple(gens), tuple(orders))


@lru_cache(maxsize=None)
def _dlog_table(modulus: int) -> Dict[int, Tuple[int, ...]]:
    group = _group(modulus)
    table: Dict[int, Tuple[int, ...]] = {}
    for exps in product(*(range(o) for o in group.orders)):
        a = 1 % modulus
        for g, e in zip(group.generators, exps):
            a = a * pow(g, e, modulus) % modulus
        table[a] = exps
    return table


@dataclass(frozen=True)
class DirichletCharacter:
    """
    - modulus: f
    - order: multiplicative order of the character
    - table: table[a] = k with chi(a) = zeta_order^k, None when gcd(a, f) > 1
    """
    modulus: int
    order: int
    table: Tuple[Optional[int], ...]

    # construction -------------------------------------------------------

    @classmethod
    def from_fractions(cls, modulus: int, fracs: Sequence[Optional[Fraction]]) -> "DirichletCharacter":
        order = 1
        for e in fracs:
            if e is not None:
                order = _lcm(order, Fraction(e).denominator)
        table = tuple(None if e is None else int((Fraction(e) % 1) * order) for e in fracs)
        return cls(modulus, order, table)

    @classmethod
    def from_function(cls, modulus: int, exponent: Callable[[int], Fraction]) -> "DirichletCharacter":
        fracs = [Fraction(exponent(a)) if gcd(a, modulus) == 1 else None for a in range(modulus)]
        return cls.from_fractions(modulus, fracs)

    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletCharacter":
        return cls.from_function(modulus, lambda a: Fraction(0))

    # values -------------------------------------------------------

    def exponent(self, a: int) -> Optional[Fraction]:
        k = self.table[a % self.modulus]
        return None if k is None else Fraction(k, self.order)

    def value(self, a: int, ring: UnramifiedRing) -> ExtScalar:
        k = self.table[a % self.modulus]
        if k is None:
            return ring.zero()
        if ring.order % self.order:
            raise RingMismatch(f"values of order {self.order} do not live in {ring}")
        return ring.root_of_unity(self.order, k)

    @property
    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        k = self.table[(self.modulus - 1) % self.modulus]
        return 1 if k == 0 else -1

    def is_even(self) -> bool:
        return self.parity == 1

    def is_trivial(self) -> bool:
        return self.order == 1

    # group operations -------------------------------------------------------

    def induce(self, modulus: int) -> "DirichletCharacter":
        if modulus % self.modulus:
            raise ValueError(f"{modulus} is not a multiple of {self.modulus}")
        return DirichletCharacter.from_fractions(
            modulus, [self.exponent(a) if gcd(a, modulus) == 1 else None for a in range(modulus)])

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = _lcm(self.modulus, other.modulus)
        fracs: List[Optional[Fraction]] = []
        for a in range(M):
            x, y = self.exponent(a), other.exponent(a)
            fracs.append(None if x is None or y is None or gcd(a, M) > 1 else (x + y) % 1)
        return DirichletCharacter.from_fractions(M, fracs)

    def power(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter.from_fractions(
            self.modulus, [None if e is None else (e * k) % 1 for e in (self.exponent(a) for a in range(self.modulus))])

    __pow__ = power

    def inverse(self) -> "DirichletCharacter":
        return self.power(-1)

    def galois_conjugate(self, p: int) -> "DirichletCharacter":
        """theta -> theta^p, the Frobenius twist of the values."""
        return self.power(p)

    def galois_orbit(self, p: int) -> List["DirichletCharacter"]:
        if self.order % p == 0:
            raise ValueError(f"p={p} divides the order {self.order}")
        orbit = [self]
        nxt = self.galois_conjugate(p)
        while nxt != self:
            orbit.append(nxt)
            nxt = nxt.galois_conjugate(p)
        return orbit

    def orbit_key(self, p: int) -> Tuple[Any, ...]:
        return min(c.key() for c in self.galois_orbit(p))

    # conductor -------------------------------------------------------

    def _factors_through(self, d: int) -> bool:
        for a in range(1, self.modulus, d):
            if gcd(a, self.modulus) == 1 and self.table[a] != 0:
                return False
        return True

    @property
    def conductor(self) -> int:
        for d in divisors(self.modulus):
            if self._factors_through(d):
                return d
        return self.modulus

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive(self) -> "DirichletCharacter":
        d = self.conductor
        if d == self.modulus:
            return self
        fracs: List[Optional[Fraction]] = [None] * d
        for b in range(d):
            if gcd(b, d) > 1:
                continue
            a = b
            while gcd(a, self.modulus) > 1:
                a += d
            fracs[b] = self.exponent(a)
        return DirichletCharacter.from_fractions(d, fracs)

    def component(self, d: int) -> "DirichletCharacter":
        """Restriction to (Z/d)^x for a unitary divisor d of the modulus."""
        rest = self.modulus // d
        if self.modulus % d or gcd(d, rest) > 1:
            raise ValueError(f"{d} is not a unitary divisor of {self.modulus}")
        fracs: List[Optional[Fraction]] = [None] * d
        for b in range(d):
            if gcd(b, d) > 1:
                continue
            a = b % d if rest == 1 else int(crt([d, rest], [b, 1])[0]) % self.modulus
            fracs[b] = self.exponent(a)
        return DirichletCharacter.from_fractions(d, fracs)

    # sums -------------------------------------------------------

    def gauss_sum(self, ring: UnramifiedRing) -> ExtScalar:
        """tau(chi) = sum_a chi(a) zeta_f^a for the distinguished zeta_f of the ring."""
        f = self.modulus
        acc = ring.zero()
        for a in range(1, f):
            if self.table[a] is not None:
                acc = acc + self.value(a, ring) * ring.root_of_unity(f, a)
        return acc

    # output -------------------------------------------------------

    def images(self) -> List[str]:
        group = _group(self.modulus)
        return [str(self.exponent(g)) for g in group.generators]

    def key(self) -> Tuple[Any, ...]:
        return (self.modulus, self.order, self.table)

    def to_json(self) -> Dict[str, Any]:
        group = _group(self.modulus)
        return {
            "modulus": self.modulus,
            "order": self.order,
            "conductor": self.conductor,
            "parity": self.parity,
            "generators": list(group.generators),
            "images": self.images(),
        }

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.modulus}, order {self.order}, images {self.images()})"


def teichmuller_character(ring: UnramifiedRing) -> DirichletCharacter:
    """omega mod p, with omega(a) the (p-1)-st root of unity of the ring congruent to a."""
    p = ring.p
    if ring.order % (p - 1):
        raise RingMismatch(f"{ring} does not contain mu_{p - 1}")
    fracs: List[Optional[Fraction]] = [None] * p
    for k in range(p - 1):
        z = ring.root_of_unity(p - 1, k)
        fracs[z.coeffs[0] % p] = Fraction(k, p - 1)
    return DirichletCharacter.from_fractions(p, fracs)


def kronecker_character(D: int) -> DirichletCharacter:
    """a -> (D/a) for a fundamental discriminant D, as a character mod |D|."""
    f = abs(D)

    def exponent(a: int) -> Fraction:
        a = a if a % 2 else a + f
        return Fraction(0) if jacobi_symbol(D % a, a) == 1 else Fraction(1, 2)

    return DirichletCharacter.from_function(f, exponent)
