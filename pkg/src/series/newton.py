"""
Newton interpolation of a power series from its values at nodes x_j = t^(s_j) - 1.

All nodes lie in pZ_p, so the product prod_{i<K}(X - x_i) has X^j coefficient of
valuation >= K - j. Any two series agreeing at the K nodes therefore differ by
at most p^(K-j) in the X^j coefficient; together with the divided-difference
losses this gives the per-coefficient ledger.
"""
from dataclasses import dataclass
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from src.padic.errors import NonDivisible, PrecisionExhausted
from src.padic.ring import ExtScalar, UnramifiedRing
from src.padic.scalar import PadicScalar, int_valuation

from .power_series import PowerSeries

Node = Union[PadicScalar, ExtScalar]


@dataclass(frozen=True)
class Interpolation:
    """
    - nodes / values: the construction data
    - coefficients: Newton-form coefficients c_j (divided differences)
    - construction: expanded polynomial coefficients, each with its own precision
    - ledger: usable precision per X^j coefficient
    - guaranteed: (m', n') certified for the interpolated series
    """
    ring: UnramifiedRing
    nodes: Tuple[ExtScalar, ...]
    values: Tuple[ExtScalar, ...]
    coefficients: Tuple[ExtScalar, ...]
    construction: Tuple[ExtScalar, ...]
    ledger: Tuple[int, ...]
    guaranteed: Tuple[int, int]

    def series(self) -> PowerSeries:
        m, n = self.guaranteed
        coeffs = [c.coeffs for c in self.construction[:n]]
        return PowerSeries(self.ring, tuple(coeffs), m)

    def evaluate(self, x: Node) -> ExtScalar:
        """The Newton polynomial at x, by nested multiplication."""
        x = _as_ext(self.ring, x)
        acc = self.coefficients[-1]
        for c, node in zip(reversed(self.coefficients[:-1]), reversed(self.nodes[:-1])):
            acc = acc * (x - node) + c
        return acc

    def to_json(self) -> Dict[str, Any]:
        return {
            "nodes": len(self.nodes),
            "ledger": list(self.ledger),
            "guaranteed": {"precision": self.guaranteed[0], "trunc": self.guaranteed[1]},
        }


def _as_ext(ring: UnramifiedRing, x: Node) -> ExtScalar:
    if isinstance(x, PadicScalar):
        return ring.from_padic(x)
    return x


def divided_differences(ring: UnramifiedRing, nodes: Sequence[ExtScalar], values: Sequence[ExtScalar]) -> List[ExtScalar]:
    table = list(values)
    out = [table[0]]
    K = len(nodes)
    for k in range(1, K):
        try:
            table = [(table[j + 1] - table[j]) / (nodes[j + k] - nodes[j]) for j in range(K - k)]
        except NonDivisible as exc:
            raise PrecisionExhausted(f"divided difference of order {k} lost all precision") from exc
        out.append(table[0])
    return out


def _expand(ring: UnramifiedRing, coefficients: Sequence[ExtScalar], nodes: Sequence[ExtScalar]) -> List[ExtScalar]:
    """Monomial coefficients of sum_j c_j prod_{i<j}(X - x_i), by Horner on polynomials."""
    K = len(coefficients)
    poly: List[ExtScalar] = [coefficients[-1]]
    for j in range(K - 2, -1, -1):
        x = nodes[j]
        shifted = [ring.zero()] + poly
        for i, c in enumerate(poly):
            shifted[i] = shifted[i] - c * x
        shifted[0] = shifted[0] + coefficients[j]
        poly = shifted
    return poly


def interpolate(ring: UnramifiedRing, nodes: Sequence[Node], values: Sequence[ExtScalar],
                precision: int, trunc: Optional[int] = None) -> Interpolation:
    """
    Series through (nodes, values), certified to (m', n') with
    n' = trunc or K // 2 + 1 and m' = min(precision, ledger_j for j < n').
    """
    if len(nodes) != len(values) or not nodes:
        raise ValueError("nodes and values must be non-empty and of equal length")
    ext_nodes = [_as_ext(ring, x) for x in nodes]
    for x in ext_nodes:
        if x.valuation() < 1:
            raise ValueError(f"node {x!r} does not lie in pZ_p")
    ext_values = [_as_ext(ring, v) for v in values]
    K = len(ext_nodes)
    coefficients = divided_differences(ring, ext_nodes, ext_values)
    construction = _expand(ring, coefficients, ext_nodes)
    ledger = tuple(min(c.precision, K - j) for j, c in enumerate(construction))
    n_out = trunc if trunc is not None else K // 2 + 1
    n_out = min(n_out, K)
    m_out = min([precision] + list(ledger[:n_out]))
    logger.bind(event="newton").debug(f"K={K} ledger={list(ledger)} guaranteed=({m_out}, {n_out})")
    if m_out <= 0:
        raise PrecisionExhausted(f"interpolation ledger {list(ledger[:n_out])} leaves no precision")
    return Interpolation(ring, tuple(ext_nodes), tuple(ext_values), tuple(coefficients),
                         tuple(construction), ledger, (m_out, n_out))


def working_precision(p: int, target: int, nodes: int, margin: int = 2) -> int:
    """Precision to carry exact inputs at so the ledger can still deliver `target`."""
    return target + nodes + int_valuation(factorial(nodes), p) + margin
