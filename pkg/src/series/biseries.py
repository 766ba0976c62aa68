from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.padic.errors import NonDivisible, PrecisionExhausted, RingMismatch
from src.padic.ring import ExtScalar, Raw, UnramifiedRing

from .power_series import PowerSeries


@dataclass(frozen=True, eq=False)
class BiSeries:
    """
    Element of W[[X, V]] on the box deg_X < rows, deg_V < cols.
    - coeffs[a][b]: coefficient of X^a V^b
    - precision: shared absolute precision
    """
    ring: UnramifiedRing
    coeffs: Tuple[Tuple[Raw, ...], ...]
    precision: int

    def __post_init__(self):
        if self.precision <= 0:
            raise PrecisionExhausted(f"bi-series precision {self.precision} <= 0")
        mod = self.ring.p ** min(self.precision, self.ring.precision)
        object.__setattr__(self, "coeffs", tuple(tuple(tuple(x % mod for x in c) for c in row) for row in self.coeffs))

    @classmethod
    def zero(cls, ring: UnramifiedRing, rows: int, cols: int, precision: int) -> "BiSeries":
        return cls(ring, tuple((ring._zero,) * cols for _ in range(rows)), precision)

    @classmethod
    def from_rows(cls, ring: UnramifiedRing, rows: Sequence[Sequence[Raw]], precision: int) -> "BiSeries":
        return cls(ring, tuple(tuple(r) for r in rows), precision)

    @classmethod
    def tensor(cls, x_part: PowerSeries, v_part: PowerSeries, rows: int, cols: int) -> "BiSeries":
        """x_part(X) * v_part(V), restricted to the box (both factors read as polynomials)."""
        ring = x_part.ring
        prec = min(x_part.precision, v_part.precision)
        mod = ring.p ** prec
        out = [[ring._zero] * cols for _ in range(rows)]
        for a in range(min(rows, x_part.trunc)):
            for b in range(min(cols, v_part.trunc)):
                out[a][b] = ring._mul(x_part.coeffs[a], v_part.coeffs[b], mod)
        return cls.from_rows(ring, out, prec)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.coeffs), (len(self.coeffs[0]) if self.coeffs else 0)

    def coefficient(self, a: int, b: int) -> ExtScalar:
        return ExtScalar(self.ring, self.coeffs[a][b], self.precision)

    def row(self, a: int) -> PowerSeries:
        """Coefficient of X^a as a series in V."""
        return PowerSeries(self.ring, self.coeffs[a], self.precision)

    def at_x_zero(self) -> PowerSeries:
        return self.row(0)

    def _check(self, other: "BiSeries") -> None:
        if other.ring.field_key != self.ring.field_key:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.shape != self.shape:
            raise ValueError(f"shape {other.shape} does not match {self.shape}")

    def __add__(self, other: "BiSeries") -> "BiSeries":
        self._check(other)
        prec = min(self.precision, other.precision)
        mod = self.ring.p ** prec
        rows = [[self.ring._add(x, y, mod) for x, y in zip(r1, r2)] for r1, r2 in zip(self.coeffs, other.coeffs)]
        return BiSeries.from_rows(self.ring, rows, prec)

    def __neg__(self) -> "BiSeries":
        mod = self.ring.p ** self.precision
        return BiSeries.from_rows(self.ring, [[self.ring._neg(x, mod) for x in r] for r in self.coeffs], self.precision)

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def divide_by_x(self) -> "BiSeries":
        if any(any(c) for c in self.coeffs[0]):
            raise NonDivisible("X^0 row is nonzero")
        return BiSeries(self.ring, self.coeffs[1:], self.precision)

    def is_zero(self) -> bool:
        return not any(any(c) for row in self.coeffs for c in row)

    def agrees(self, other: "BiSeries", precision: Optional[int] = None) -> bool:
        self._check(other)
        prec = min(self.precision, other.precision)
        if precision is not None:
            prec = min(prec, precision)
        mod = self.ring.p ** prec
        return all((x - y) % mod == 0
                   for r1, r2 in zip(self.coeffs, other.coeffs)
                   for c1, c2 in zip(r1, r2)
                   for x, y in zip(c1, c2))

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.agrees(other)

    __hash__ = None

    def to_json(self) -> Dict[str, Any]:
        rows, cols = self.shape
        return {
            "ring": {"p": self.ring.p, "order": self.ring.order, "degree": self.ring.degree},
            "precision": self.precision,
            "shape": [rows, cols],
            "coeffs": [[[str(x) for x in c] for c in row] for row in self.coeffs],
        }

    def __repr__(self) -> str:
        rows, cols = self.shape
        return f"BiSeries({rows}x{cols} + O({self.ring.p}^{self.precision}))"


def rows_of(series: List[PowerSeries], cols: int) -> List[List[Raw]]:
    """Pad a list of V-series into box rows."""
    out = []
    for s in series:
        row = list(s.coeffs[:cols]) + [s.ring._zero] * max(0, cols - s.trunc)
        out.append(row)
    return out
