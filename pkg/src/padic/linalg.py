"""
Linear algebra over the truncated local rings W/p^m.

Two tools:
- relation_quotient: sparse elimination of a relation list whose pivots are units,
  giving a free quotient basis (Manin relations, plus-quotients, eigen-coinvariants).
- smith_form: dense minimal-valuation elimination with column transforms, giving
  Fitting diagonals, cokernel orders and saturated kernels.
"""
import heapq
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from loguru import logger

from .errors import Indeterminate
from .ring import Raw, UnramifiedRing

Row = Dict[int, Raw]
Matrix = List[List[Raw]]


def _is_zero(a: Raw) -> bool:
    return not any(a)


def _row_axpy(ring: UnramifiedRing, target: Row, coeff: Raw, row: Row, skip: Optional[int] = None) -> None:
    """target -= coeff * row, in place, dropping zero entries."""
    for k, v in row.items():
        if k == skip:
            continue
        prod = ring._mul(coeff, v)
        cur = target.get(k)
        new = ring._sub(cur, prod) if cur is not None else ring._neg(prod)
        if _is_zero(new):
            target.pop(k, None)
        else:
            target[k] = new


@dataclass
class QuotientBasis:
    """
    Free quotient of W^ngens by a relation list.
    - free: generator indices that survive as basis vectors, in increasing order
    - expressions: every generator as a sparse vector over free positions
    """
    ring: UnramifiedRing
    ngens: int
    free: List[int]
    expressions: Dict[int, Row] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.free)

    def coordinates(self, gen: int) -> Row:
        return self.expressions.get(gen, {})

    def reduce(self, combo: Dict[int, Raw]) -> List[Raw]:
        """Dense coordinate vector of a sparse generator combination."""
        ring = self.ring
        out = [ring._zero] * self.rank
        for g, c in combo.items():
            for pos, e in self.coordinates(g).items():
                out[pos] = ring._add(out[pos], ring._mul(c, e))
        return out


def relation_quotient(ring: UnramifiedRing, ngens: int, relations: Iterable[Row]) -> QuotientBasis:
    """Eliminate `relations` (sparse rows over generators) with unit pivots."""
    order: Dict[int, int] = {}
    pivots: Dict[int, Row] = {}
    for rel in relations:
        row = {k: v for k, v in rel.items() if not _is_zero(v)}
        heap = [(order[k], k) for k in row if k in pivots]
        heapq.heapify(heap)
        while heap:
            _, col = heapq.heappop(heap)
            c = row.get(col)
            if c is None:
                continue
            prow = pivots[col]
            for k in prow:
                if k != col and k in pivots and k not in row:
                    heapq.heappush(heap, (order[k], k))
            _row_axpy(ring, row, c, prow)
        if not row:
            continue
        units = [k for k in sorted(row) if ring._is_unit(row[k])]
        if not units:
            raise Indeterminate(f"relation with no unit coefficient over {ring}; the quotient has p-torsion")
        col = units[0]
        inv = ring._inv(row[col])
        pivots[col] = {k: ring._mul(v, inv) for k, v in row.items()}
        order[col] = len(order)

    free = [g for g in range(ngens) if g not in pivots]
    pos = {g: i for i, g in enumerate(free)}
    expressions: Dict[int, Row] = {g: {pos[g]: ring._one} for g in free}
    for col in sorted(pivots, key=order.__getitem__, reverse=True):
        expr: Row = {}
        for k, v in pivots[col].items():
            if k == col:
                continue
            for fpos, e in expressions[k].items():
                cur = expr.get(fpos, ring._zero)
                new = ring._sub(cur, ring._mul(v, e))
                if _is_zero(new):
                    expr.pop(fpos, None)
                else:
                    expr[fpos] = new
        expressions[col] = expr
    logger.bind(event="relation_quotient").debug(f"{ngens} generators, {len(pivots)} pivots, rank {len(free)}")
    return QuotientBasis(ring, ngens, free, expressions)


@dataclass
class SmithForm:
    """
    U * A * V = diag(p^v_i * unit) for a k x n matrix A over W/p^m.
    - valuations: v_i for i < rank; entries at or beyond precision count as zero
    - transform / inverse: V and V^-1, known modulo p^(m - max v)
    """
    valuations: List[int]
    rank: int
    transform: Matrix
    inverse: Matrix
    precision: int
    ncols: int

    def kernel(self) -> Matrix:
        """Columns of V spanning the saturated kernel (as column vectors, returned row-wise)."""
        return [[row[j] for row in self.transform] for j in range(self.rank, self.ncols)]


def identity(ring: UnramifiedRing, n: int) -> Matrix:
    return [[ring._one if i == j else ring._zero for j in range(n)] for i in range(n)]


def smith_form(ring: UnramifiedRing, matrix: Sequence[Sequence[Raw]], ncols: Optional[int] = None,
               track: bool = True) -> SmithForm:
    A = [list(r) for r in matrix]
    k = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    m = ring.precision
    V = identity(ring, n) if track else []
    Vinv = identity(ring, n) if track else []
    vals: List[int] = []
    t = 0
    while t < min(k, n):
        best = None
        for i in range(t, k):
            row = A[i]
            for j in range(t, n):
                if _is_zero(row[j]):
                    continue
                v = ring._val(row[j], m)
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            if track:
                for row in V:
                    row[t], row[j] = row[j], row[t]
                Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        unit = ring._divide_by_p(A[t][t], v)
        uinv = ring._inv(unit)
        prow = A[t]
        for i2 in range(t + 1, k):
            a = A[i2][t]
            if _is_zero(a):
                continue
            f = ring._mul(ring._divide_by_p(a, v), uinv)
            r2 = A[i2]
            for j2 in range(t, n):
                if not _is_zero(prow[j2]):
                    r2[j2] = ring._sub(r2[j2], ring._mul(f, prow[j2]))
        for j2 in range(t + 1, n):
            b = prow[j2]
            if _is_zero(b):
                continue
            g = ring._mul(ring._divide_by_p(b, v), uinv)
            prow[j2] = ring._zero
            if track:
                for row in V:
                    if not _is_zero(row[t]):
                        row[j2] = ring._sub(row[j2], ring._mul(g, row[t]))
                rt = Vinv[t]
                rj = Vinv[j2]
                Vinv[t] = [ring._add(x, ring._mul(g, y)) for x, y in zip(rt, rj)]
        vals.append(v)
        t += 1
    lost = max(vals) if vals else 0
    return SmithForm(vals, len(vals), V, Vinv, m - lost, n)


def fitting_diagonal(ring: UnramifiedRing, matrix: Sequence[Sequence[Raw]], ncols: Optional[int] = None) -> List[int]:
    return smith_form(ring, matrix, ncols, track=False).valuations


def cokernel_exponent(ring: UnramifiedRing, relations: Sequence[Sequence[Raw]], generators: int,
                      margin: int = 1) -> int:
    """
    log_p of |W^generators / span(relations)| for relations given as rows of length
    `generators`. Raises Indeterminate if the order is infinite or too close to p^m.
    """
    if generators == 0:
        return 0
    vals = fitting_diagonal(ring, relations, generators)
    if len(vals) < generators:
        raise Indeterminate(f"cokernel has rank {generators - len(vals)} at precision {ring.precision}")
    if vals and max(vals) > ring.precision - margin:
        raise Indeterminate(f"diagonal entry p^{max(vals)} too close to the precision cap p^{ring.precision}")
    return ring.degree * sum(vals)


def mat_mul(ring: UnramifiedRing, A: Sequence[Sequence[Raw]], B: Sequence[Sequence[Raw]]) -> Matrix:
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [ring._zero] * cols
        for k, a in enumerate(row):
            if _is_zero(a):
                continue
            for j, b in enumerate(B[k]):
                if not _is_zero(b):
                    acc[j] = ring._add(acc[j], ring._mul(a, b))
        out.append(acc)
    return out


def mat_vec(ring: UnramifiedRing, A: Sequence[Sequence[Raw]], x: Sequence[Raw]) -> List[Raw]:
    out = []
    for row in A:
        acc = ring._zero
        for a, b in zip(row, x):
            if not _is_zero(a) and not _is_zero(b):
                acc = ring._add(acc, ring._mul(a, b))
        out.append(acc)
    return out


def transpose(A: Sequence[Sequence[Raw]]) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def is_zero_matrix(A: Sequence[Sequence[Raw]]) -> bool:
    return all(_is_zero(x) for row in A for x in row)
