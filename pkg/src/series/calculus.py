"""
Diagonalization f(X) -> f(X + V + XV) and the divided-derivative series
xi^(k) = (X+1)^k (1/k!) d^k f/dX^k.

Inputs known modulo X^n are read through their polynomial representative, so
the bidegree box n x n is filled exactly. The (1/k!) f^(k) coefficients are
binomials C(i, k) a_i, which keeps the p-adic precision intact.
"""
from functools import lru_cache
from math import comb
from typing import Any, Dict, List, Tuple

from loguru import logger

from src.padic.errors import NonDivisible, PrecisionExhausted
from src.padic.linalg import smith_form
from src.padic.ring import Raw

from .biseries import BiSeries
from .power_series import PowerSeries


@lru_cache(maxsize=None)
def _diagonal_table(n: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """table[i][a][b] = coefficient of X^a V^b in (X + V + XV)^i, for i, a, b < n."""
    out = []
    for i in range(n):
        rows = []
        for a in range(n):
            row = []
            for b in range(n):
                row.append(sum(comb(i, j) * (-1) ** (i - j) * comb(j, a) * comb(j, b) for j in range(max(a, b), i + 1)))
            rows.append(tuple(row))
        out.append(tuple(rows))
    return tuple(out)


def diagonalize(f: PowerSeries) -> BiSeries:
    n = f.trunc
    ring, mod = f.ring, f.ring.p ** f.precision
    table = _diagonal_table(n)
    out = [[[0] * ring.degree for _ in range(n)] for _ in range(n)]
    for i, c in enumerate(f.coeffs):
        if not any(c):
            continue
        t = table[i]
        for a in range(n):
            for b in range(n):
                k = t[a][b]
                if k:
                    slot = out[a][b]
                    for r in range(ring.degree):
                        slot[r] += k * c[r]
    rows = [[tuple(x % mod for x in slot) for slot in row] for row in out]
    return BiSeries.from_rows(ring, rows, f.precision)


def _xi_coeffs(f: PowerSeries, k: int) -> List[Raw]:
    """Coefficients of (X+1)^k * sum_i C(i,k) a_i X^(i-k) as a polynomial of degree < n."""
    ring, mod, n = f.ring, f.ring.p ** f.precision, f.trunc
    div = [ring._scale(f.coeffs[i], comb(i, k), mod) for i in range(k, n)]
    out = [[0] * ring.degree for _ in range(n)]
    for j, c in enumerate(div):
        if not any(c):
            continue
        for e in range(k + 1):
            b = comb(k, e)
            slot = out[j + e]
            for r in range(ring.degree):
                slot[r] += b * c[r]
    return [tuple(x % mod for x in slot) for slot in out]


def xi_n(f: PowerSeries, k: int) -> PowerSeries:
    """(X+1)^k (1/k!) d^k f/dX^k, known modulo X^(n-k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return f
    if k >= f.trunc:
        raise PrecisionExhausted(f"xi^({k}) needs more than X^{f.trunc} of the input")
    return PowerSeries(f.ring, tuple(_xi_coeffs(f, k)[: f.trunc - k]), f.precision)


def tilde_xi_1(f: PowerSeries) -> BiSeries:
    """X^-1 (diagonalize(f) - 1 (x) f) on the box (n-1) x n."""
    diag = diagonalize(f)
    mod = f.ring.p ** f.precision
    if any((x - y) % mod for c1, c2 in zip(diag.coeffs[0], f.coeffs) for x, y in zip(c1, c2)):
        raise NonDivisible("diagonalization does not restrict to f at X = 0")
    return BiSeries(f.ring, diag.coeffs[1:], f.precision)


def expansion_by_xi(f: PowerSeries) -> BiSeries:
    """sum_k X^k (x) xi^(k)(V) on the box n x n."""
    rows = [list(f.coeffs)] + [_xi_coeffs(f, k) for k in range(1, f.trunc)]
    return BiSeries.from_rows(f.ring, rows, f.precision)


def diagonal_identity_holds(f: PowerSeries) -> bool:
    """diagonalize(f) == sum_k X^k (x) xi^(k) on the full box."""
    return diagonalize(f).agrees(expansion_by_xi(f))


def derivative_identity_holds(f: PowerSeries) -> bool:
    """tilde_xi_1(f) at X = 0 equals xi^(1)(f) as a series in V."""
    return tilde_xi_1(f).at_x_zero().agrees(xi_n(f, 1), trunc=f.trunc - 1)


def diagonal_kernel_check(f: PowerSeries) -> Dict[str, Any]:
    """
    Multiplication by diagonalize(f / p^mu) on k[X,V]/(X^n, V^n), k the residue field.
    Its kernel must sit in total degree >= n - lambda.
    """
    mu = f.valuation()
    if mu >= f.precision:
        raise PrecisionExhausted("series vanishes at its precision")
    g = f.divide_by_p(mu) if mu else f
    residue = g.ring.with_precision(1)
    g1 = PowerSeries(residue, g.coeffs, 1)
    lam = next(i for i, c in enumerate(g1.coeffs) if any(c)) if not g1.is_zero() else g1.trunc
    n = g1.trunc
    d = diagonalize(g1)
    size = n * n
    matrix = [[residue._zero] * size for _ in range(size)]
    for a1 in range(n):
        for b1 in range(n):
            col = a1 * n + b1
            for a in range(a1, n):
                for b in range(b1, n):
                    c = d.coeffs[a - a1][b - b1]
                    if any(c):
                        matrix[a * n + b][col] = c
    smith = smith_form(residue, matrix, size)
    kernel = smith.kernel()
    ok = True
    for vec in kernel:
        for idx, c in enumerate(vec):
            if any(c) and (idx // n) + (idx % n) < n - lam:
                ok = False
    logger.bind(event="diagonal_kernel").debug(f"lambda={lam} kernel_dim={len(kernel)} ok={ok}")
    return {"ok": ok, "mu": mu, "lambda": lam, "kernel_dim": len(kernel)}
