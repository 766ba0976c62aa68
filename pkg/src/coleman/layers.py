"""
The layers W[zeta_{p^r}] of the cyclotomic tower, presented on the power basis
1, Y, ..., Y^(phi(p^r) - 1) with Y = zeta_{p^r}.

Elements are tuples of raw W-coefficients. Reduction uses Y^(p^r) = 1 and then
Phi_{p^r}(Y) = sum_{i<p} Y^(i p^(r-1)) = 0.
"""
from functools import lru_cache
from math import comb
from typing import List, Sequence, Tuple

from src.padic.ring import Raw, UnramifiedRing

from .errors import NormFailure

Layer = Tuple[Raw, ...]


class CyclotomicLayer:
    def __init__(self, base: UnramifiedRing, r: int):
        if r < 1:
            raise ValueError("layers start at r = 1")
        self.base = base
        self.r = r
        self.p = base.p
        self.order = base.p ** r
        self.step = base.p ** (r - 1)
        self.dim = self.order - self.step

    @staticmethod
    def of(base: UnramifiedRing, r: int) -> "CyclotomicLayer":
        return _layer(base, r)

    def __repr__(self) -> str:
        return f"CyclotomicLayer({self.base}, r={self.r})"

    # raw arithmetic -------------------------------------------------------

    def _reduce(self, c: List[List[int]]) -> Layer:
        W = self.base
        folded = [[0] * W.degree for _ in range(self.order)]
        for e, v in enumerate(c):
            slot = folded[e % self.order]
            for k in range(W.degree):
                slot[k] += v[k]
        for e in range(self.order - 1, self.dim - 1, -1):
            top = folded[e]
            if not any(top):
                continue
            low = e - self.dim
            for i in range(self.p - 1):
                slot = folded[low + i * self.step]
                for k in range(W.degree):
                    slot[k] -= top[k]
            folded[e] = [0] * W.degree
        return tuple(tuple(x % W.mod for x in folded[e]) for e in range(self.dim))

    def zero(self) -> Layer:
        return (self.base._zero,) * self.dim

    def from_base(self, w: Raw) -> Layer:
        return (w,) + (self.base._zero,) * (self.dim - 1)

    def one(self) -> Layer:
        return self.from_base(self.base._one)

    def y_power(self, e: int) -> Layer:
        c = [[0] * self.base.degree for _ in range(self.order)]
        c[e % self.order][0] = 1
        return self._reduce(c)

    def add(self, a: Layer, b: Layer) -> Layer:
        return tuple(self.base._add(x, y) for x, y in zip(a, b))

    def sub(self, a: Layer, b: Layer) -> Layer:
        return tuple(self.base._sub(x, y) for x, y in zip(a, b))

    def scale(self, a: Layer, w: Raw) -> Layer:
        return tuple(self.base._mul(x, w) for x in a)

    def mul(self, a: Layer, b: Layer) -> Layer:
        W = self.base
        prod = [[0] * W.degree for _ in range(2 * self.dim - 1)]
        for i, x in enumerate(a):
            if not any(x):
                continue
            for j, y in enumerate(b):
                if not any(y):
                    continue
                xy = W._mul(x, y)
                slot = prod[i + j]
                for k in range(W.degree):
                    slot[k] += xy[k]
        return self._reduce(prod)

    def galois(self, a: Layer, e: int) -> Layer:
        """Y -> Y^e for e prime to p."""
        if e % self.p == 0:
            raise ValueError(f"{e} is not prime to p")
        c = [[0] * self.base.degree for _ in range(self.order)]
        for i, x in enumerate(a):
            slot = c[(i * e) % self.order]
            for k in range(self.base.degree):
                slot[k] += x[k]
        return self._reduce(c)

    def frobenius(self, a: Layer, times: int = 1) -> Layer:
        """Frobenius on W-coefficients, Y fixed."""
        return tuple(self.base._frobenius(x, times) for x in a)

    def divide_by_p(self, a: Layer, k: int = 1) -> Layer:
        return tuple(self.base._divide_by_p(x, k) for x in a)

    def is_zero(self, a: Layer, precision: int) -> bool:
        mod = self.p ** precision
        return all(v % mod == 0 for x in a for v in x)

    def agrees(self, a: Layer, b: Layer, precision: int) -> bool:
        return self.is_zero(self.sub(a, b), precision)

    def eval_poly_x(self, coeffs: Sequence[Raw]) -> Layer:
        """sum_i c_i Y^i for a polynomial in x = 1 + T."""
        c = [[0] * self.base.degree for _ in range(self.order)]
        for i, x in enumerate(coeffs):
            slot = c[i % self.order]
            for k in range(self.base.degree):
                slot[k] += x[k]
        return self._reduce(c)

    def eval_poly_t(self, coeffs: Sequence[Raw]) -> Layer:
        """sum_i c_i (Y - 1)^i, i.e. a polynomial in T at T = zeta_{p^r} - 1."""
        return self.eval_poly_x(t_to_x(self.base, coeffs))

    # norms -------------------------------------------------------

    def norm_down(self, a: Layer) -> Layer:
        """N_{r -> r-1} for r >= 2, on the basis of layer r - 1."""
        if self.r == 1:
            raise ValueError("use norm_to_ground from the first layer")
        acc = self.one()
        for k in range(self.p):
            acc = self.mul(acc, self.galois(a, 1 + k * self.step))
        lower = CyclotomicLayer.of(self.base, self.r - 1)
        out = []
        for i, x in enumerate(acc):
            if i % self.p:
                if any(x):
                    raise NormFailure(f"norm from layer {self.r} is not fixed by Gal(r / r-1)")
            else:
                out.append(x)
        return tuple(out[: lower.dim])

    def norm_to_ground(self, a: Layer) -> Raw:
        """N_{1 -> 0}: product of the p - 1 conjugates, an element of W."""
        if self.r != 1:
            raise ValueError("norm_to_ground starts from the first layer")
        acc = self.one()
        for e in range(1, self.p):
            acc = self.mul(acc, self.galois(a, e))
        if any(any(x) for x in acc[1:]):
            raise NormFailure("norm to the ground layer left a non-constant residue")
        return acc[0]

    def to_json(self, a: Layer) -> List[List[str]]:
        return [[str(v) for v in x] for x in a]


def t_to_x(base: UnramifiedRing, coeffs: Sequence[Raw]) -> List[Raw]:
    """Coefficients of sum_i c_i (x - 1)^i in the variable x."""
    n = len(coeffs)
    out = [[0] * base.degree for _ in range(n)]
    for i, c in enumerate(coeffs):
        if not any(c):
            continue
        for j in range(i + 1):
            b = comb(i, j) * (-1) ** (i - j)
            slot = out[j]
            for k in range(base.degree):
                slot[k] += b * c[k]
    return [tuple(v % base.mod for v in slot) for slot in out]


def x_to_t(base: UnramifiedRing, coeffs: Sequence[Raw]) -> List[Raw]:
    """Coefficients of sum_i c_i (1 + T)^i in the variable T."""
    n = len(coeffs)
    out = [[0] * base.degree for _ in range(n)]
    for i, c in enumerate(coeffs):
        if not any(c):
            continue
        for j in range(i + 1):
            b = comb(i, j)
            slot = out[j]
            for k in range(base.degree):
                slot[k] += b * c[k]
    return [tuple(v % base.mod for v in slot) for slot in out]


@lru_cache(maxsize=None)
def _layer(base: UnramifiedRing, r: int) -> CyclotomicLayer:
    return CyclotomicLayer(base, r)
