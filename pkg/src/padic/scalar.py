from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from .errors import NonDivisible, NonIntegral, NonUnit, NonUnitInverse, PrecisionExhausted, RingMismatch


def int_valuation(n: int, p: int, cap: Optional[int] = None) -> int:
    """p-adic valuation of an integer; zero gets `cap` (or raises when no cap)."""
    if n == 0:
        if cap is None:
            raise ValueError("valuation of 0 needs a cap")
        return cap
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


def unit_part(n: int, p: int) -> int:
    while n and n % p == 0:
        n //= p
    return n


@dataclass(frozen=True, eq=False)
class PadicScalar:
    """
    Element of Z_p known modulo p^precision.
    - value: representative in [0, p^precision)
    - prime: odd prime p
    - precision: absolute precision m (value known mod p^m)
    """
    value: int
    prime: int
    precision: int

    def __post_init__(self):
        if self.precision <= 0:
            raise PrecisionExhausted(f"precision {self.precision} <= 0 for p={self.prime}")
        object.__setattr__(self, "value", self.value % (self.prime ** self.precision))

    @classmethod
    def from_int(cls, n: int, p: int, precision: int) -> "PadicScalar":
        return cls(n, p, precision)

    @classmethod
    def from_fraction(cls, x: Fraction, p: int, precision: int) -> "PadicScalar":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise NonIntegral(f"{x} is not {p}-integral")
        mod = p ** precision
        return cls(x.numerator * pow(x.denominator, -1, mod), p, precision)

    @property
    def p(self) -> int:
        return self.prime

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    def valuation(self) -> int:
        return int_valuation(self.value, self.prime, cap=self.precision)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.value % self.prime != 0

    def zero_like(self) -> "PadicScalar":
        return PadicScalar(0, self.prime, self.precision)

    def one_like(self) -> "PadicScalar":
        return PadicScalar(1, self.prime, self.precision)

    def _coerce(self, other: Any) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.prime != self.prime:
                raise RingMismatch(f"primes {self.prime} and {other.prime}")
            return other
        if isinstance(other, int):
            return PadicScalar(other, self.prime, self.precision)
        if isinstance(other, Fraction):
            return PadicScalar.from_fraction(other, self.prime, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar(self.value + other.value, self.prime, min(self.precision, other.precision))

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(-self.value, self.prime, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar(self.value - other.value, self.prime, min(self.precision, other.precision))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.precision + other.valuation(), other.precision + self.valuation())
        return PadicScalar(self.value * other.value, self.prime, prec)

    __rmul__ = __mul__

    def scale(self, n: int) -> "PadicScalar":
        """Multiply by an exact integer; p-factors of n raise the precision."""
        if n == 0:
            return self.zero_like()
        return PadicScalar(self.value * n, self.prime, self.precision + int_valuation(n, self.prime))

    def shift(self, k: int) -> "PadicScalar":
        return PadicScalar(self.value * self.prime ** k, self.prime, self.precision + k)

    def divide_by_p(self, k: int = 1) -> "PadicScalar":
        if k == 0:
            return self
        if self.value % (self.prime ** k):
            raise NonDivisible(f"{self!r} is not divisible by {self.prime}^{k}")
        return PadicScalar(self.value // self.prime ** k, self.prime, self.precision - k)

    def inverse(self) -> "PadicScalar":
        if not self.is_unit():
            raise NonUnitInverse(f"{self!r} has positive valuation")
        return PadicScalar(pow(self.value, -1, self.modulus), self.prime, self.precision)

    def __truediv__(self, other):
        if isinstance(other, int):
            v = int_valuation(other, self.prime)
            u = unit_part(other, self.prime)
            return self.divide_by_p(v) * PadicScalar(u, self.prime, self.precision).inverse()
        other = self._coerce(other)
        v = other.valuation()
        if v >= other.precision:
            raise NonUnitInverse("division by zero at stated precision")
        unit = other.divide_by_p(v)
        return self.divide_by_p(v) * unit.inverse()

    def __pow__(self, e: int) -> "PadicScalar":
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

    def reduce(self, precision: int) -> "PadicScalar":
        return PadicScalar(self.value, self.prime, min(precision, self.precision))

    def agrees(self, other: Any, precision: Optional[int] = None) -> bool:
        other = self._coerce(other)
        prec = min(self.precision, other.precision)
        if precision is not None:
            prec = min(prec, precision)
        return (self.value - other.value) % (self.prime ** prec) == 0

    def __eq__(self, other):
        if not isinstance(other, (PadicScalar, int, Fraction)):
            return NotImplemented
        try:
            return self.agrees(other)
        except (RingMismatch, NonIntegral):
            return False

    __hash__ = None

    def lift(self) -> int:
        return self.value

    def signed(self) -> int:
        """Representative in (-p^m/2, p^m/2]."""
        mod = self.modulus
        return self.value - mod if self.value > mod // 2 else self.value

    def to_json(self) -> Dict[str, Any]:
        return {"prime": self.prime, "precision": self.precision, "coeffs": [str(self.value)]}

    def __repr__(self) -> str:
        return f"PadicScalar({self.value} + O({self.prime}^{self.precision}))"


Scalarish = Union[PadicScalar, int]


def teichmuller(a: PadicScalar) -> PadicScalar:
    """The (p-1)-st root of unity congruent to a mod p, by iterated p-th powering."""
    if not a.is_unit():
        raise NonUnit(f"teichmuller needs a unit, got {a!r}")
    mod = a.modulus
    x = a.value
    for _ in range(a.precision + 1):
        nxt = pow(x, a.prime, mod)
        if nxt == x:
            break
        x = nxt
    return PadicScalar(x, a.prime, a.precision)
