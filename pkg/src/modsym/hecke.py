"""
Hecke, diamond and Atkin-Lehner operators on a SymbolSpace.

Labels: "T5" / "T_5", "U11" / "U_11", "<3>", "w". Matrices act on row vectors
(rows are images of basis vectors). Each T/U/diamond is checked for commutation
with the operators already built on the same space.
"""
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, Iterable, List, Tuple
import re

from loguru import logger
from sympy import isprime

from src.padic.linalg import Matrix, identity, mat_mul
from src.padic.ring import Raw

from .heilbronn import merel_set
from .manin import Pair, lift_to_sl2, zero_to
from .space import SymbolSpace

_LABEL = re.compile(r"^(?:(?P<kind>[TU])_?(?P<ell>\d+)|<(?P<d>-?\d+)>|(?P<w>w))$")


def _same(A: Matrix, B: Matrix) -> bool:
    return all(tuple(x) == tuple(y) for ra, rb in zip(A, B) for x, y in zip(ra, rb))


@dataclass(frozen=True)
class HeckeOperator:
    label: str
    space: SymbolSpace = field(repr=False)
    matrix: Matrix = field(repr=False)
    checks: Dict[str, bool] = field(default_factory=dict)

    def apply(self, vector: List[Raw]) -> List[Raw]:
        return self.space.apply(self.matrix, vector)

    def then(self, other: "HeckeOperator") -> Matrix:
        """Matrix of other o self."""
        if not self.space.rank:
            return []
        return mat_mul(self.space.ring, self.matrix, other.matrix)

    def commutes(self, other: "HeckeOperator") -> bool:
        return _same(self.then(other), other.then(self))

    def on_cuspidal(self) -> Matrix:
        return self.space.restrict_to_cuspidal(self.matrix)

    def to_json(self, with_matrix: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {"label": self.label, "checks": dict(self.checks)}
        if with_matrix:
            out["matrix"] = [[list(x) for x in row] for row in self.matrix]
        return out


def heilbronn_action(n: int) -> Any:
    matrices = merel_set(n)

    def action(u: int, v: int) -> Iterable[Tuple[Pair, int]]:
        for a, b, c, d in matrices:
            yield (u * a + v * c, u * b + v * d), 1

    return action


def diamond_action(e: int) -> Any:
    def action(u: int, v: int) -> Iterable[Tuple[Pair, int]]:
        yield (e * u, e * v), 1

    return action


def atkin_lehner_action(M: int) -> Any:
    """W = [[0, -1], [M, 0]]: W g {0, oo} = {0, W g oo} - {0, W g 0}, expanded by continued fractions."""
    def action(u: int, v: int) -> Iterable[Tuple[Pair, int]]:
        a, b, c, d = lift_to_sl2(u, v, M)
        for row in zero_to(-c, M * a):
            yield row, 1
        for row in zero_to(-d, M * b):
            yield row, -1

    return action


def parse_label(label: str) -> Tuple[str, int]:
    m = _LABEL.match(label.strip())
    if m is None:
        raise ValueError(f"unknown operator label {label!r}")
    if m.group("w"):
        return "w", 0
    if m.group("d") is not None:
        return "<>", int(m.group("d"))
    return m.group("kind"), int(m.group("ell"))


def hecke(space: SymbolSpace, label: str) -> HeckeOperator:
    kind, n = parse_label(label)
    M = space.level
    if kind in ("T", "U"):
        if not isprime(n):
            raise ValueError(f"{label}: {n} is not prime")
        if kind == "T" and M % n == 0:
            raise ValueError(f"{label}: {n} divides the level {M}, use U_{n}")
        if kind == "U" and M % n:
            raise ValueError(f"{label}: {n} does not divide the level {M}")
        matrix = space.matrix_of(heilbronn_action(n), skip_inadmissible=True)
        name = f"{kind}{n}"
    elif kind == "<>":
        if gcd(n, M) != 1:
            raise ValueError(f"{label}: {n} is not a unit mod {M}")
        matrix = space.matrix_of(diamond_action(n))
        name = f"<{n % M}>"
    else:
        if space.character is not None and space.character.order > 2:
            raise ValueError("w swaps psi and psi^-1; build the space without a character of order > 2")
        matrix = space.matrix_of(atkin_lehner_action(M))
        op = HeckeOperator("w", space, matrix)
        square = op.then(op)
        op.checks["involution"] = _same(square, identity(space.ring, space.rank))
        if not op.checks["involution"]:
            logger.bind(event="atkin_lehner", level=M).warning("w^2 is not the identity")
        return op

    op = HeckeOperator(name, space, matrix)
    previous = space.register(name, op)
    clash = [other.label for other in previous.values() if not op.commutes(other)]
    op.checks["commutes"] = not clash
    if clash:
        logger.bind(event="hecke_commutation", level=M).error(f"{name} fails to commute with {clash}")
    logger.bind(event="hecke", level=M).debug(f"{name} on rank {space.rank}")
    return op
