"""
Unramified coefficient rings W = Z_p[zeta_E] (p does not divide E) truncated at p^m.

Elements are coefficient vectors on the basis 1, x, ..., x^(f-1) where x is the
Teichmueller root of unity zeta_E and f is the order of p modulo E. The ring
keeps the minimal polynomial G of zeta_E over Z_p; all arithmetic is done on
plain integer tuples ("raw" elements) and wrapped in ExtScalar at the API edge.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import Poly, cyclotomic_poly, symbols
from sympy.ntheory import n_order, primitive_root

from .errors import NonDivisible, NonIntegral, NonUnit, NonUnitInverse, PrecisionExhausted, RingMismatch
from .scalar import PadicScalar, int_valuation, teichmuller, unit_part

Raw = Tuple[int, ...]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class UnramifiedRing:
    def __init__(self, p: int, order: int, precision: int, modulus: Sequence[int]):
        self.p = p
        self.order = order
        self.precision = precision
        self.mod = p ** precision
        self.modulus: Raw = tuple(c % self.mod for c in modulus)
        self.degree = len(self.modulus) - 1
        self.q = p ** self.degree
        self._zeta_cache: Dict[int, Raw] = {}
        self._frob_basis: Optional[List[Raw]] = None

    # construction -------------------------------------------------------

    @staticmethod
    def build(p: int, order: int, precision: int) -> "UnramifiedRing":
        return _build_ring(p, order, precision)

    @staticmethod
    def for_orders(p: int, orders: Iterable[int], precision: int) -> "UnramifiedRing":
        """Smallest ring Z_p[zeta_E] holding roots of unity of every given order."""
        order = 1
        for d in orders:
            order = _lcm(order, d)
        return _build_ring(p, order, precision)

    def with_precision(self, precision: int) -> "UnramifiedRing":
        return _build_ring(self.p, self.order, precision)

    @property
    def field_key(self) -> Tuple[int, int]:
        return (self.p, self.order)

    def __repr__(self) -> str:
        return f"UnramifiedRing(p={self.p}, E={self.order}, f={self.degree}, m={self.precision})"

    # raw arithmetic -------------------------------------------------------

    def _reduce(self, c: List[int], mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        f = self.degree
        g = self.modulus
        for k in range(len(c) - 1, f - 1, -1):
            t = c[k]
            if t:
                base = k - f
                for i in range(f):
                    c[base + i] -= t * g[i]
        out = [x % mod for x in c[:f]]
        out.extend([0] * (f - len(out)))
        return tuple(out)

    def _add(self, a: Raw, b: Raw, mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        return tuple((x + y) % mod for x, y in zip(a, b))

    def _sub(self, a: Raw, b: Raw, mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        return tuple((x - y) % mod for x, y in zip(a, b))

    def _neg(self, a: Raw, mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        return tuple((-x) % mod for x in a)

    def _scale(self, a: Raw, n: int, mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        return tuple((x * n) % mod for x in a)

    def _mul(self, a: Raw, b: Raw, mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        if self.degree == 1:
            return ((a[0] * b[0]) % mod,)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self._reduce(prod, mod)

    def _pow(self, a: Raw, e: int, mod: Optional[int] = None) -> Raw:
        result = self._one
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base, mod)
            base = self._mul(base, base, mod)
            e >>= 1
        return result

    def _val(self, a: Raw, cap: Optional[int] = None) -> int:
        cap = self.precision if cap is None else cap
        return min(int_valuation(x, self.p, cap) for x in a)

    def _is_zero(self, a: Raw) -> bool:
        return not any(a)

    def _is_unit(self, a: Raw) -> bool:
        return any(x % self.p for x in a)

    def _inv(self, a: Raw, precision: Optional[int] = None) -> Raw:
        precision = precision or self.precision
        if not self._is_unit(a):
            raise NonUnitInverse(f"{a} is not a unit in {self}")
        y = self._pow(tuple(x % self.p for x in a), self.q - 2, self.p)
        k = 1
        while k < precision:
            k = min(2 * k, precision)
            mod = self.p ** k
            ay = self._mul(a, y, mod)
            two_minus = tuple(((2 if i == 0 else 0) - x) % mod for i, x in enumerate(ay))
            y = self._mul(y, two_minus, mod)
        return y

    def _divide_by_p(self, a: Raw, k: int) -> Raw:
        pk = self.p ** k
        if any(x % pk for x in a):
            raise NonDivisible(f"{a} not divisible by {self.p}^{k}")
        return tuple(x // pk for x in a)

    @property
    def _one(self) -> Raw:
        return (1,) + (0,) * (self.degree - 1)

    @property
    def _zero(self) -> Raw:
        return (0,) * self.degree

    def _from_int(self, n: int, mod: Optional[int] = None) -> Raw:
        mod = mod or self.mod
        return (n % mod,) + (0,) * (self.degree - 1)

    def _zeta_pow(self, k: int) -> Raw:
        k %= self.order
        hit = self._zeta_cache.get(k)
        if hit is None:
            hit = self._pow(self._reduce([0, 1]), k)
            self._zeta_cache[k] = hit
        return hit

    def _frobenius(self, a: Raw, times: int = 1) -> Raw:
        times %= self.degree
        if times == 0 or self.degree == 1:
            return a
        if self._frob_basis is None:
            self._frob_basis = [self._zeta_pow(self.p * i) for i in range(self.degree)]
        for _ in range(times):
            out = [0] * self.degree
            for i, c in enumerate(a):
                if c:
                    img = self._frob_basis[i]
                    for j in range(self.degree):
                        out[j] += c * img[j]
            a = tuple(x % self.mod for x in out)
        return a

    # element constructors -------------------------------------------------

    def element(self, coeffs: Sequence[int], precision: Optional[int] = None) -> "ExtScalar":
        precision = self.precision if precision is None else min(precision, self.precision)
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        if len(coeffs) > self.degree:
            raw = self._reduce(list(coeffs), self.p ** precision)
        else:
            raw = tuple(c % self.p ** precision for c in coeffs)
        return ExtScalar(self, raw, precision)

    def zero(self, precision: Optional[int] = None) -> "ExtScalar":
        return self.element([0], precision)

    def one(self, precision: Optional[int] = None) -> "ExtScalar":
        return self.element([1], precision)

    def from_int(self, n: int, precision: Optional[int] = None) -> "ExtScalar":
        return self.element([n], precision)

    def from_fraction(self, x: Fraction, precision: Optional[int] = None) -> "ExtScalar":
        x = Fraction(x)
        precision = self.precision if precision is None else precision
        if x.denominator % self.p == 0:
            raise NonIntegral(f"{x} is not {self.p}-integral")
        mod = self.p ** precision
        return self.element([x.numerator * pow(x.denominator, -1, mod)], precision)

    def from_padic(self, a: PadicScalar) -> "ExtScalar":
        if a.prime != self.p:
            raise RingMismatch(f"{a!r} does not live over p={self.p}")
        return self.element([a.value], a.precision)

    def zeta(self) -> "ExtScalar":
        return ExtScalar(self, self._zeta_pow(1), self.precision)

    def root_of_unity(self, d: int, k: int = 1) -> "ExtScalar":
        """zeta_d^k for the distinguished zeta_d = zeta_E^(E/d)."""
        if self.order % d:
            raise RingMismatch(f"mu_{d} is not contained in {self}")
        return ExtScalar(self, self._zeta_pow((self.order // d) * k), self.precision)

    def teichmuller(self, a: "ExtScalar") -> "ExtScalar":
        if not a.is_unit():
            raise NonUnit(f"teichmuller needs a unit, got {a!r}")
        mod = a.ring.p ** a.precision
        x = a.coeffs
        for _ in range(a.precision + 1):
            nxt = self._pow(x, self.q, mod)
            if nxt == x:
                break
            x = nxt
        return ExtScalar(self, x, a.precision)


@lru_cache(maxsize=None)
def _residue_factor(p: int, order: int) -> Tuple[int, ...]:
    """Deterministic irreducible factor of Phi_E mod p, low-to-high, monic."""
    X = symbols("X")
    _, factors = Poly(cyclotomic_poly(order, X), X, modulus=p).factor_list()
    options = []
    for fac, _mult in factors:
        coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
        options.append(tuple(coeffs))
    return min(options)


@lru_cache(maxsize=None)
def _build_ring(p: int, order: int, precision: int) -> UnramifiedRing:
    if order % p == 0:
        raise ValueError(f"E={order} must be prime to p={p}")
    if precision <= 0:
        raise PrecisionExhausted("ring precision must be positive")
    degree = 1 if order <= 2 else int(n_order(p, order))
    mod = p ** precision
    if degree == 1:
        g = 1 if order == 1 else pow(int(primitive_root(p)), (p - 1) // order, p)
        zeta = teichmuller(PadicScalar(g, p, precision)).value if p > 2 else g
        ring = UnramifiedRing(p, order, precision, (-zeta, 1))
    else:
        h = _residue_factor(p, order)
        boot = UnramifiedRing(p, order, precision, h)
        x = boot._reduce([0, 1])
        for _ in range(precision + 1):
            nxt = boot._pow(x, boot.q)
            if nxt == x:
                break
            x = nxt
        # G(Y) = prod_i (Y - x^(p^i)), coefficients must land in Z_p
        poly: List[Raw] = [boot._one]
        conj = x
        for _ in range(degree):
            shifted: List[Raw] = [boot._zero] + poly
            for i, c in enumerate(poly):
                shifted[i] = boot._sub(shifted[i], boot._mul(c, conj))
            poly = shifted
            conj = boot._pow(conj, p)
        coeffs = []
        for c in poly:
            if any(c[1:]):
                raise ArithmeticError("minimal polynomial of zeta is not rational")
            coeffs.append(c[0])
        ring = UnramifiedRing(p, order, precision, coeffs)
    logger.bind(event="ring_built").debug(f"{ring} modulus={ring.modulus}")
    return ring


@dataclass(frozen=True, eq=False)
class ExtScalar:
    """Element of an unramified ring, all coefficients sharing one absolute precision."""
    ring: UnramifiedRing
    coeffs: Raw
    precision: int

    def __post_init__(self):
        if self.precision <= 0:
            raise PrecisionExhausted(f"precision {self.precision} <= 0 in {self.ring}")
        if self.precision > self.ring.precision:
            object.__setattr__(self, "precision", self.ring.precision)
        mod = self.ring.p ** self.precision
        object.__setattr__(self, "coeffs", tuple(c % mod for c in self.coeffs))

    @property
    def p(self) -> int:
        return self.ring.p

    def valuation(self) -> int:
        return self.ring._val(self.coeffs, self.precision)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.ring._is_unit(self.coeffs)

    def zero_like(self) -> "ExtScalar":
        return self.ring.zero(self.precision)

    def one_like(self) -> "ExtScalar":
        return self.ring.one(self.precision)

    def _coerce(self, other: Any) -> "ExtScalar":
        if isinstance(other, ExtScalar):
            if other.ring is self.ring:
                return other
            if other.ring.field_key != self.ring.field_key:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other, self.precision)
        if isinstance(other, Fraction):
            return self.ring.from_fraction(other, self.precision)
        if isinstance(other, PadicScalar):
            return self.ring.from_padic(other)
        return NotImplemented

    def _target(self, other: "ExtScalar") -> UnramifiedRing:
        return self.ring if self.ring.precision <= other.ring.precision else other.ring

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self._target(other)
        prec = min(self.precision, other.precision)
        return ExtScalar(ring, ring._add(self.coeffs, other.coeffs, ring.p ** prec), prec)

    __radd__ = __add__

    def __neg__(self):
        return ExtScalar(self.ring, self.ring._neg(self.coeffs, self.ring.p ** self.precision), self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self._target(other)
        prec = min(self.precision, other.precision)
        return ExtScalar(ring, ring._sub(self.coeffs, other.coeffs, ring.p ** prec), prec)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self._target(other)
        prec = min(self.precision + other.valuation(), other.precision + self.valuation(), ring.precision)
        return ExtScalar(ring, ring._mul(self.coeffs, other.coeffs, ring.p ** prec), prec)

    __rmul__ = __mul__

    def scale(self, n: int) -> "ExtScalar":
        if n == 0:
            return self.zero_like()
        prec = min(self.precision + int_valuation(n, self.p), self.ring.precision)
        return ExtScalar(self.ring, self.ring._scale(self.coeffs, n, self.ring.p ** prec), prec)

    def shift(self, k: int) -> "ExtScalar":
        return self.scale(self.p ** k)

    def divide_by_p(self, k: int = 1) -> "ExtScalar":
        if k == 0:
            return self
        return ExtScalar(self.ring, self.ring._divide_by_p(self.coeffs, k), self.precision - k)

    def inverse(self) -> "ExtScalar":
        if not self.is_unit():
            raise NonUnitInverse(f"{self!r} has positive valuation")
        return ExtScalar(self.ring, self.ring._inv(self.coeffs, self.precision), self.precision)

    def __truediv__(self, other):
        if isinstance(other, int):
            v = int_valuation(other, self.p)
            u = unit_part(other, self.p)
            return self.divide_by_p(v) * self.ring.from_int(u, self.precision).inverse()
        other = self._coerce(other)
        v = other.valuation()
        if v >= other.precision:
            raise NonUnitInverse("division by zero at stated precision")
        return self.divide_by_p(v) * other.divide_by_p(v).inverse()

    def __pow__(self, e: int) -> "ExtScalar":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.one_like()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, times: int = 1) -> "ExtScalar":
        return ExtScalar(self.ring, self.ring._frobenius(self.coeffs, times), self.precision)

    def reduce(self, precision: int) -> "ExtScalar":
        return ExtScalar(self.ring, self.coeffs, min(precision, self.precision))

    def lift_to(self, ring: UnramifiedRing) -> "ExtScalar":
        if ring.field_key != self.ring.field_key:
            raise RingMismatch(f"{self.ring} vs {ring}")
        return ExtScalar(ring, self.coeffs, min(self.precision, ring.precision))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def constant(self) -> PadicScalar:
        if not self.is_rational():
            raise ValueError(f"{self!r} does not lie in Z_p")
        return PadicScalar(self.coeffs[0], self.p, self.precision)

    def agrees(self, other: Any, precision: Optional[int] = None) -> bool:
        other = self._coerce(other)
        prec = min(self.precision, other.precision)
        if precision is not None:
            prec = min(prec, precision)
        mod = self.p ** prec
        return all((x - y) % mod == 0 for x, y in zip(self.coeffs, other.coeffs))

    def __eq__(self, other):
        if not isinstance(other, (ExtScalar, int, Fraction, PadicScalar)):
            return NotImplemented
        try:
            return self.agrees(other)
        except (RingMismatch, NonIntegral):
            return False

    __hash__ = None

    def to_json(self) -> Dict[str, Any]:
        return {"prime": self.p, "precision": self.precision, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        return f"ExtScalar({list(self.coeffs)} + O({self.p}^{self.precision}))"
