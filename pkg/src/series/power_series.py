"""
Truncated power series over an unramified coefficient ring.

A PowerSeries is known modulo (p^precision, X^trunc). All coefficients share one
absolute precision. A first-order pole is carried as a flag: pole=1 means the
value is X^-1 times the stored series.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple, Union

from src.padic.errors import ConvergenceDomain, NonDivisible, NonUnitInverse, PrecisionExhausted, RingMismatch
from src.padic.ring import ExtScalar, Raw, UnramifiedRing
from src.padic.scalar import PadicScalar, int_valuation

if TYPE_CHECKING:
    from .generator import Generator

Coefficient = Union[ExtScalar, PadicScalar, int, Fraction]


def _raw_of(ring: UnramifiedRing, c: Coefficient, mod: int) -> Tuple[Raw, int]:
    """Raw coefficient vector and its precision; exact integers report the ring cap."""
    if isinstance(c, ExtScalar):
        if c.ring.field_key != ring.field_key:
            raise RingMismatch(f"{c.ring} vs {ring}")
        return tuple(x % mod for x in c.coeffs), c.precision
    if isinstance(c, PadicScalar):
        return ring._from_int(c.value, mod), c.precision
    if isinstance(c, Fraction):
        e = ring.from_fraction(c)
        return tuple(x % mod for x in e.coeffs), e.precision
    return ring._from_int(int(c), mod), ring.precision


def _is_rational(a: Raw) -> bool:
    return not any(a[1:])


@dataclass(frozen=True, eq=False)
class PowerSeries:
    ring: UnramifiedRing
    coeffs: Tuple[Raw, ...]
    precision: int
    pole: int = 0

    def __post_init__(self):
        if self.precision <= 0:
            raise PrecisionExhausted(f"series precision {self.precision} <= 0")
        if not self.coeffs:
            raise PrecisionExhausted("series truncation exhausted (no known coefficients)")
        if self.precision > self.ring.precision:
            object.__setattr__(self, "precision", self.ring.precision)
        if self.pole not in (0, 1):
            raise ValueError("only first-order poles are supported")
        mod = self.ring.p ** self.precision
        object.__setattr__(self, "coeffs", tuple(tuple(x % mod for x in c) for c in self.coeffs))

    # construction -------------------------------------------------------

    @classmethod
    def from_coefficients(cls, ring: UnramifiedRing, coeffs: Sequence[Coefficient],
                          precision: Optional[int] = None, trunc: Optional[int] = None) -> "PowerSeries":
        prec = ring.precision if precision is None else precision
        raws = []
        for c in coeffs:
            raw, cp = _raw_of(ring, c, ring.mod)
            prec = min(prec, cp)
            raws.append(raw)
        if trunc is not None:
            raws = (raws + [ring._zero] * trunc)[:trunc]
        return cls(ring, tuple(raws), prec)

    @classmethod
    def zero(cls, ring: UnramifiedRing, trunc: int, precision: Optional[int] = None) -> "PowerSeries":
        return cls(ring, (ring._zero,) * trunc, ring.precision if precision is None else precision)

    @classmethod
    def one(cls, ring: UnramifiedRing, trunc: int, precision: Optional[int] = None) -> "PowerSeries":
        return cls.from_coefficients(ring, [1], precision, trunc)

    @classmethod
    def variable(cls, ring: UnramifiedRing, trunc: int, precision: Optional[int] = None) -> "PowerSeries":
        return cls.from_coefficients(ring, [0, 1], precision, trunc)

    # basic accessors -------------------------------------------------------

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    @property
    def _mod(self) -> int:
        return self.ring.p ** self.precision

    def __getitem__(self, i: int) -> ExtScalar:
        if i >= self.trunc:
            raise PrecisionExhausted(f"coefficient {i} lies beyond X^{self.trunc}")
        return ExtScalar(self.ring, self.coeffs[i], self.precision)

    def coefficients(self) -> List[ExtScalar]:
        return [self[i] for i in range(self.trunc)]

    def constant_term(self) -> ExtScalar:
        if self.pole:
            raise ValueError("constant term of a series with a pole")
        return self[0]

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.coeffs)

    def valuation(self) -> int:
        """Minimum coefficient valuation (precision if zero)."""
        return min(self.ring._val(c, self.precision) for c in self.coeffs)

    def _like(self, coeffs: Sequence[Raw], precision: Optional[int] = None, pole: Optional[int] = None) -> "PowerSeries":
        return PowerSeries(self.ring, tuple(coeffs), self.precision if precision is None else precision,
                           self.pole if pole is None else pole)

    # arithmetic -------------------------------------------------------

    def _coerce(self, other: Any) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            if other.ring.field_key != self.ring.field_key:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (ExtScalar, PadicScalar, int, Fraction)):
            return PowerSeries.from_coefficients(self.ring, [other], self.precision, self.trunc)
        return NotImplemented

    def _align(self, other: "PowerSeries") -> Tuple["PowerSeries", "PowerSeries"]:
        a, b = self, other
        if a.pole and not b.pole:
            b = b.multiply_by_x()._like_pole(1)
        elif b.pole and not a.pole:
            a = a.multiply_by_x()._like_pole(1)
        return a, b

    def _like_pole(self, pole: int) -> "PowerSeries":
        return PowerSeries(self.ring, self.coeffs, self.precision, pole)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        n = min(a.trunc, b.trunc)
        prec = min(a.precision, b.precision)
        mod = self.ring.p ** prec
        return PowerSeries(self.ring, tuple(self.ring._add(a.coeffs[i], b.coeffs[i], mod) for i in range(n)), prec, a.pole)

    __radd__ = __add__

    def __neg__(self):
        return self._like([self.ring._neg(c, self._mod) for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, (ExtScalar, PadicScalar, Fraction)):
            return self.scale_by(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        pole = self.pole + other.pole
        if pole > 1:
            raise ValueError("product would carry a second-order pole")
        n = min(self.trunc, other.trunc)
        prec = min(self.precision, other.precision)
        return PowerSeries(self.ring, _mul_raw(self.ring, self.coeffs, other.coeffs, n, self.ring.p ** prec), prec, pole)

    __rmul__ = __mul__

    def scale(self, n: int) -> "PowerSeries":
        """Multiply by an exact integer."""
        if n == 0:
            return self._like([self.ring._zero] * self.trunc)
        prec = min(self.precision + int_valuation(n, self.p), self.ring.precision)
        mod = self.ring.p ** prec
        return self._like([self.ring._scale(c, n, mod) for c in self.coeffs], prec)

    def scale_by(self, c: Coefficient) -> "PowerSeries":
        raw, cp = _raw_of(self.ring, c, self.ring.mod)
        v = self.ring._val(raw, cp)
        prec = min(self.precision + v, cp + self.valuation(), self.ring.precision)
        mod = self.ring.p ** prec
        return self._like([self.ring._mul(x, raw, mod) for x in self.coeffs], prec)

    def __pow__(self, e: int) -> "PowerSeries":
        result = PowerSeries.one(self.ring, self.trunc, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divide_by_p(self, k: int = 1) -> "PowerSeries":
        if k == 0:
            return self
        return self._like([self.ring._divide_by_p(c, k) for c in self.coeffs], self.precision - k)

    def derivative(self) -> "PowerSeries":
        if self.pole:
            raise ValueError("derivative of a series with a pole")
        if self.trunc < 2:
            raise PrecisionExhausted("derivative exhausts the X-truncation")
        return self._like([self.ring._scale(self.coeffs[i], i, self._mod) for i in range(1, self.trunc)])

    def multiply_by_x(self) -> "PowerSeries":
        return self._like((self.ring._zero,) + self.coeffs)

    def divide_by_x(self) -> "PowerSeries":
        if any(self.coeffs[0]):
            raise NonDivisible(f"constant term {list(self.coeffs[0])} is nonzero mod p^{self.precision}")
        return self._like(self.coeffs[1:])

    def inverse(self) -> "PowerSeries":
        if self.pole:
            raise NonUnitInverse("series with a pole is not a unit")
        a0 = self.coeffs[0]
        if not self.ring._is_unit(a0):
            raise NonUnitInverse(f"constant term {list(a0)} is not a unit")
        ring, mod = self.ring, self._mod
        inv0 = ring._inv(a0, self.precision)
        out = [inv0]
        for k in range(1, self.trunc):
            acc = ring._zero
            for i in range(1, k + 1):
                if any(self.coeffs[i]):
                    acc = ring._add(acc, ring._mul(self.coeffs[i], out[k - i], mod), mod)
            out.append(ring._neg(ring._mul(acc, inv0, mod), mod))
        return self._like(out)

    def truncate(self, n: int) -> "PowerSeries":
        if n > self.trunc:
            raise PrecisionExhausted(f"cannot extend X^{self.trunc} to X^{n}")
        return self._like(self.coeffs[:n])

    def reduce(self, precision: int) -> "PowerSeries":
        return self._like(self.coeffs, min(precision, self.precision))

    def lift_to(self, ring: UnramifiedRing) -> "PowerSeries":
        if ring.field_key != self.ring.field_key:
            raise RingMismatch(f"{self.ring} vs {ring}")
        return PowerSeries(ring, self.coeffs, min(self.precision, ring.precision), self.pole)

    def frobenius(self, times: int = 1) -> "PowerSeries":
        return self._like([self.ring._frobenius(c, times) for c in self.coeffs])

    # composition and evaluation -------------------------------------------------------

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner) for inner with vanishing constant term."""
        if self.pole or inner.pole:
            raise ValueError("composition with poles is not supported")
        if any(inner.coeffs[0]):
            raise ConvergenceDomain("composition needs an inner series without constant term")
        n = min(self.trunc, inner.trunc)
        prec = min(self.precision, inner.precision)
        ring, mod = self.ring, self.ring.p ** prec
        rational = all(_is_rational(c) for c in inner.coeffs[:n])
        g_int = [c[0] for c in inner.coeffs[:n]]
        acc = [ring._zero] * n
        acc[0] = self.coeffs[n - 1]
        for i in range(n - 2, -1, -1):
            if rational:
                acc = _mul_int_series(ring, acc, g_int, n, mod)
            else:
                acc = list(_mul_raw(ring, tuple(acc), inner.coeffs, n, mod))
            acc[0] = ring._add(acc[0], self.coeffs[i], mod)
        return PowerSeries(ring, tuple(acc), prec)

    def eval_at(self, x: Coefficient) -> ExtScalar:
        """Sum a_i x^i for v(x) >= 1; the unknown tail costs trunc * v(x) digits."""
        if self.pole:
            raise ValueError("cannot evaluate a series with a pole")
        raw, xp = _raw_of(self.ring, x, self.ring.mod)
        vx = self.ring._val(raw, xp)
        if vx < 1:
            raise ConvergenceDomain(f"evaluation point has valuation {vx} < 1")
        prec = min(self.precision, xp, self.trunc * vx)
        mod = self.ring.p ** prec
        acc = self.ring._zero
        for c in reversed(self.coeffs):
            acc = self.ring._add(self.ring._mul(acc, raw, mod), c, mod)
        return ExtScalar(self.ring, acc, prec)

    def eval_at_ts(self, s: int, gen: "Generator") -> ExtScalar:
        """Evaluate at t^s - 1 for the generator t (s = 0 returns the constant term)."""
        if s == 0:
            return self.constant_term()
        return self.eval_at(gen.node(s))

    def reduce_mod(self, P: "PowerSeries") -> "PowerSeries":
        """
        Remainder modulo a monic distinguished polynomial P (stored with leading 1).
        The unknown tail X^trunc * (...) contributes X^trunc mod P, whose valuation
        bounds the precision of the remainder.
        """
        lam = P.trunc - 1
        if lam == 0:
            raise ValueError("reduction modulo a constant")
        ring = self.ring
        prec = min(self.precision, P.precision)
        mod = ring.p ** prec
        rem = _poly_rem(ring, list(self.coeffs), P.coeffs, mod)
        tail = [ring._zero] * self.trunc + [ring._one]
        tail_rem = _poly_rem(ring, tail, P.coeffs, mod)
        tail_val = min(ring._val(c, prec) for c in tail_rem)
        return PowerSeries(ring, tuple(rem), min(prec, tail_val))

    # comparison and output -------------------------------------------------------

    def agrees(self, other: "PowerSeries", precision: Optional[int] = None, trunc: Optional[int] = None) -> bool:
        if self.pole != other.pole:
            return False
        prec = min(self.precision, other.precision)
        if precision is not None:
            prec = min(prec, precision)
        n = min(self.trunc, other.trunc)
        if trunc is not None:
            n = min(n, trunc)
        mod = self.ring.p ** prec
        return all((x - y) % mod == 0 for i in range(n) for x, y in zip(self.coeffs[i], other.coeffs[i]))

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.agrees(other)

    __hash__ = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "ring": {"p": self.ring.p, "order": self.ring.order, "degree": self.ring.degree},
            "precision": self.precision,
            "trunc": self.trunc,
            "pole": self.pole,
            "coeffs": [[str(x) for x in c] for c in self.coeffs],
        }

    def __repr__(self) -> str:
        head = " + ".join(f"{list(c)}X^{i}" for i, c in enumerate(self.coeffs) if any(c)) or "0"
        pole = "X^-1 * " if self.pole else ""
        return f"PowerSeries({pole}{head} + O({self.p}^{self.precision}, X^{self.trunc}))"


def _mul_raw(ring: UnramifiedRing, a: Sequence[Raw], b: Sequence[Raw], n: int, mod: int) -> Tuple[Raw, ...]:
    out = [ring._zero] * n
    for i in range(min(n, len(a))):
        x = a[i]
        if not any(x):
            continue
        for j in range(min(n - i, len(b))):
            y = b[j]
            if any(y):
                out[i + j] = ring._add(out[i + j], ring._mul(x, y, mod), mod)
    return tuple(out)


def _mul_int_series(ring: UnramifiedRing, a: Sequence[Raw], g: Sequence[int], n: int, mod: int) -> List[Raw]:
    f = ring.degree
    out = [[0] * f for _ in range(n)]
    for i in range(n):
        x = a[i]
        if not any(x):
            continue
        for j in range(n - i):
            gj = g[j]
            if gj:
                slot = out[i + j]
                for k in range(f):
                    slot[k] += x[k] * gj
    return [tuple(v % mod for v in slot) for slot in out]


def _poly_rem(ring: UnramifiedRing, f: List[Raw], P: Sequence[Raw], mod: int) -> List[Raw]:
    """Remainder of the polynomial f modulo the monic polynomial P (low-to-high)."""
    lam = len(P) - 1
    f = list(f) + [ring._zero] * max(0, lam - len(f))
    for i in range(len(f) - 1, lam - 1, -1):
        c = f[i]
        if not any(c):
            continue
        base = i - lam
        for j in range(lam):
            f[base + j] = ring._sub(f[base + j], ring._mul(c, P[j], mod), mod)
        f[i] = ring._zero
    return [tuple(x % mod for x in c) for c in f[:lam]]

