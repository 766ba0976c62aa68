"""
W[zeta_p] presented as W[pi]/(Phi_p(1 + pi)), with pi = zeta_p - 1.

Only used for the p-th root twiddles of the Coleman measure projection.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, List, Optional, Sequence, Tuple

from .errors import PrecisionExhausted, RingMismatch
from .ring import ExtScalar, Raw, UnramifiedRing

RRaw = Tuple[Raw, ...]


class RamifiedRing:
    def __init__(self, base: UnramifiedRing):
        self.base = base
        self.p = base.p
        self.precision = base.precision
        self.degree = base.p - 1
        # Eisenstein modulus: ((1+pi)^p - 1)/pi, low-to-high, monic
        self.eisenstein: Tuple[int, ...] = tuple(comb(self.p, j + 1) for j in range(self.p))
        self._zeta_cache = {}

    @staticmethod
    def over(base: UnramifiedRing) -> "RamifiedRing":
        return _ramified(base)

    def __repr__(self) -> str:
        return f"RamifiedRing({self.base})"

    # raw arithmetic -------------------------------------------------------

    @property
    def _zero(self) -> RRaw:
        return (self.base._zero,) * self.degree

    @property
    def _one(self) -> RRaw:
        return (self.base._one,) + (self.base._zero,) * (self.degree - 1)

    def _add(self, a: RRaw, b: RRaw, mod: Optional[int] = None) -> RRaw:
        return tuple(self.base._add(x, y, mod) for x, y in zip(a, b))

    def _sub(self, a: RRaw, b: RRaw, mod: Optional[int] = None) -> RRaw:
        return tuple(self.base._sub(x, y, mod) for x, y in zip(a, b))

    def _scale_base(self, a: RRaw, w: Raw, mod: Optional[int] = None) -> RRaw:
        return tuple(self.base._mul(x, w, mod) for x in a)

    def _mul(self, a: RRaw, b: RRaw, mod: Optional[int] = None) -> RRaw:
        W = self.base
        d = self.degree
        prod: List[List[int]] = [[0] * W.degree for _ in range(2 * d - 1)]
        for i, x in enumerate(a):
            if not any(x):
                continue
            for j, y in enumerate(b):
                if not any(y):
                    continue
                xy = W._mul(x, y, mod)
                slot = prod[i + j]
                for k in range(W.degree):
                    slot[k] += xy[k]
        for k in range(2 * d - 2, d - 1, -1):
            top = prod[k]
            if any(top):
                base = k - d
                for i in range(d):
                    e = self.eisenstein[i]
                    if e:
                        slot = prod[base + i]
                        for t in range(W.degree):
                            slot[t] -= top[t] * e
        mod = mod or W.mod
        return tuple(tuple(c % mod for c in prod[i]) for i in range(d))

    def _pow(self, a: RRaw, e: int) -> RRaw:
        result = self._one
        while e:
            if e & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            e >>= 1
        return result

    def _from_base(self, w: Raw) -> RRaw:
        return (w,) + (self.base._zero,) * (self.degree - 1)

    def _zeta_p(self, j: int) -> RRaw:
        j %= self.p
        hit = self._zeta_cache.get(j)
        if hit is None:
            one_plus_pi = (self.base._one, self.base._one) + (self.base._zero,) * (self.degree - 2)
            hit = self._pow(one_plus_pi, j)
            self._zeta_cache[j] = hit
        return hit

    def _in_base(self, a: RRaw) -> bool:
        return not any(any(c) for c in a[1:])

    def _val(self, a: RRaw, cap: int) -> int:
        """Valuation in units of 1/(p-1)."""
        return min(self.degree * self.base._val(c, cap) + i for i, c in enumerate(a))

    def _horner(self, coeffs: Sequence[Raw], point: RRaw, mod: int) -> RRaw:
        """sum_i coeffs[i] point^i for W-coefficients."""
        acc = self._zero
        for c in reversed(coeffs):
            acc = self._mul(acc, point, mod)
            acc = (self.base._add(acc[0], c, mod),) + acc[1:]
        return acc

    # wrapped --------------------------------------------------------------

    def element(self, coeffs: Sequence[ExtScalar]) -> "RamifiedScalar":
        prec = min(c.precision for c in coeffs)
        raw = [c.coeffs for c in coeffs] + [self.base._zero] * (self.degree - len(coeffs))
        return RamifiedScalar(self, tuple(raw[: self.degree]), prec)

    def from_base(self, w: ExtScalar) -> "RamifiedScalar":
        return RamifiedScalar(self, self._from_base(w.coeffs), w.precision)

    def pi(self) -> "RamifiedScalar":
        return RamifiedScalar(self, (self.base._zero, self.base._one) + (self.base._zero,) * (self.degree - 2),
                              self.precision)

    def zeta_p(self, j: int = 1) -> "RamifiedScalar":
        return RamifiedScalar(self, self._zeta_p(j), self.precision)

    def evaluate(self, coeffs: Sequence[Raw], point: "RamifiedScalar", precision: int) -> "RamifiedScalar":
        """
        A W-polynomial (truncation of a series) at a point of positive valuation.
        The unknown tail beyond len(coeffs) is divisible by p^(len(coeffs) * v / (p-1)).
        """
        v = point.valuation()
        if v < 1:
            raise ValueError(f"{point!r} is not in the maximal ideal")
        prec = min(precision, point.precision, (len(coeffs) * v) // self.degree)
        if prec <= 0:
            raise PrecisionExhausted(f"{len(coeffs)} terms carry no information at {point!r}")
        mod = self.p ** prec
        return RamifiedScalar(self, self._horner(coeffs, point.coeffs, mod), prec)


@lru_cache(maxsize=None)
def _ramified(base: UnramifiedRing) -> RamifiedRing:
    if base.p < 3:
        raise ValueError("ramified twiddles need an odd prime")
    return RamifiedRing(base)


@dataclass(frozen=True, eq=False)
class RamifiedScalar:
    ring: RamifiedRing
    coeffs: RRaw
    precision: int

    def __post_init__(self):
        if self.precision <= 0:
            raise PrecisionExhausted(f"precision {self.precision} <= 0 in {self.ring}")
        mod = self.ring.p ** min(self.precision, self.ring.precision)
        object.__setattr__(self, "coeffs", tuple(tuple(x % mod for x in c) for c in self.coeffs))

    def _check(self, other: "RamifiedScalar") -> "RamifiedScalar":
        if isinstance(other, ExtScalar):
            return self.ring.from_base(other)
        if other.ring is not self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other: Any) -> "RamifiedScalar":
        other = self._check(other)
        prec = min(self.precision, other.precision)
        return RamifiedScalar(self.ring, self.ring._add(self.coeffs, other.coeffs), prec)

    def __sub__(self, other: Any) -> "RamifiedScalar":
        other = self._check(other)
        prec = min(self.precision, other.precision)
        return RamifiedScalar(self.ring, self.ring._sub(self.coeffs, other.coeffs), prec)

    def __mul__(self, other: Any) -> "RamifiedScalar":
        other = self._check(other)
        prec = min(self.precision, other.precision)
        return RamifiedScalar(self.ring, self.ring._mul(self.coeffs, other.coeffs), prec)

    def __pow__(self, e: int) -> "RamifiedScalar":
        return RamifiedScalar(self.ring, self.ring._pow(self.coeffs, e), self.precision)

    def scale_base(self, w: ExtScalar) -> "RamifiedScalar":
        prec = min(self.precision, w.precision)
        return RamifiedScalar(self.ring, self.ring._scale_base(self.coeffs, w.coeffs, self.ring.p ** prec), prec)

    def divide_by_p(self, k: int = 1) -> "RamifiedScalar":
        """Coordinatewise division; p is a rational integer so this is exact division in W[pi]."""
        if k == 0:
            return self
        base = self.ring.base
        return RamifiedScalar(self.ring, tuple(base._divide_by_p(c, k) for c in self.coeffs), self.precision - k)

    def reduce(self, precision: int) -> "RamifiedScalar":
        return RamifiedScalar(self.ring, self.coeffs, min(precision, self.precision))

    def valuation(self) -> int:
        """Valuation in units of 1/(p-1)."""
        return self.ring._val(self.coeffs, self.precision)

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.coeffs)

    def in_base(self) -> bool:
        return self.ring._in_base(self.coeffs)

    def to_base(self) -> ExtScalar:
        if not self.in_base():
            raise ValueError(f"{self!r} is not in the unramified subring")
        return ExtScalar(self.ring.base, self.coeffs[0], self.precision)

    def __repr__(self) -> str:
        return f"RamifiedScalar({[list(c) for c in self.coeffs]} + O({self.ring.p}^{self.precision}))"
