"""
Weight-2 modular symbols for Gamma_1(M) over W/p^m.

The space is the free module on the Manin symbols modulo
- [c:d] + [d:-c] = 0 and [c:d] + [d:-c-d] + [-c-d:c] = 0,
- [c:d] - [-c:d] = 0 when sign = 1 (plus quotient for the star involution),
- [gc:gd] - psi(g) [c:d] = 0 for generators g of (Z/M)^x when a character psi is given.

Cusps get the matching quotient, and the cuspidal part is the saturated kernel of
the boundary map.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple
import threading

from loguru import logger

from src.characters.dirichlet import CharacterGroup, DirichletCharacter
from src.padic.linalg import Matrix, QuotientBasis, Row, SmithForm, mat_mul, mat_vec, relation_quotient, smith_form, transpose
from src.padic.ring import ExtScalar, Raw, UnramifiedRing

from .manin import CuspKey, ManinSymbols, Pair, cusp_diamond, cusp_star, manin_symbols, symbol_cusps

SIGNS = (0, 1)

Action = Callable[[int, int], Iterable[Tuple[Pair, int]]]


def _row(ring: UnramifiedRing, terms: Iterable[Tuple[int, Raw]]) -> Row:
    row: Row = {}
    for k, c in terms:
        row[k] = ring._add(row[k], c) if k in row else c
    return {k: v for k, v in row.items() if any(v)}


def _character_mod(psi: Optional[DirichletCharacter], M: int) -> Optional[DirichletCharacter]:
    if psi is None:
        return None
    if psi.modulus == M:
        return psi
    return psi.induce(M)


@dataclass(eq=False)
class SymbolSpace:
    """
    - basis: quotient basis over the Manin symbols
    - cusps: cusp keys and their quotient basis
    - boundary: rows are boundaries of the basis vectors in cusp coordinates
    - cuspidal: rows span the cuspidal part, in basis coordinates
    """
    level: int
    ring: UnramifiedRing
    sign: int
    character: Optional[DirichletCharacter]
    symbols: ManinSymbols
    basis: QuotientBasis
    cusp_keys: Tuple[CuspKey, ...]
    cusp_basis: QuotientBasis
    boundary: Matrix
    smith: SmithForm
    operators: Dict[str, Any] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def rank(self) -> int:
        return self.basis.rank

    @property
    def cuspidal(self) -> Matrix:
        return self.smith.kernel()

    @property
    def cuspidal_rank(self) -> int:
        return self.rank - self.smith.rank

    def _coeff(self, c: Any) -> Raw:
        if isinstance(c, int):
            return self.ring._from_int(c)
        if isinstance(c, ExtScalar):
            return c.lift_to(self.ring).coeffs
        return tuple(c)

    # vectors -----------------------------------------------------------------

    def zero(self) -> List[Raw]:
        return [self.ring._zero] * self.rank

    def combination(self, terms: Dict[Pair, Any]) -> List[Raw]:
        """Class of sum c [u:v]; raises InadmissiblePair for pairs off P^1(Z/M)."""
        ring = self.ring
        combo: Dict[int, Raw] = {}
        for (u, v), c in terms.items():
            i = self.symbols.index(u, v)
            coeff = self._coeff(c)
            combo[i] = ring._add(combo[i], coeff) if i in combo else coeff
        return self.basis.reduce(combo)

    def symbol(self, u: int, v: int) -> List[Raw]:
        return self.combination({(u, v): 1})

    def is_zero(self, vector: List[Raw]) -> bool:
        return not any(any(x) for x in vector)

    # operators ---------------------------------------------------------------

    def matrix_of(self, action: Action, skip_inadmissible: bool = False) -> Matrix:
        """Rows are the images of the basis vectors under an action on symbols."""
        ring = self.ring
        rows: Matrix = []
        for g in self.basis.free:
            c, d = self.symbols.pairs[g]
            combo: Dict[int, Raw] = {}
            for (u, v), k in action(c, d):
                i = self.symbols.find(u, v) if skip_inadmissible else self.symbols.index(u, v)
                if i is None:
                    continue
                coeff = ring._from_int(k)
                combo[i] = ring._add(combo[i], coeff) if i in combo else coeff
            rows.append(self.basis.reduce(combo))
        return rows

    def apply(self, matrix: Matrix, vector: List[Raw]) -> List[Raw]:
        if not self.rank:
            return []
        return mat_mul(self.ring, [vector], matrix)[0]

    def boundary_of(self, vector: List[Raw]) -> List[Raw]:
        if not self.cusp_basis.rank:
            return []
        return mat_mul(self.ring, [vector], self.boundary)[0]

    def cuspidal_coordinates(self, vector: List[Raw]) -> List[Raw]:
        """Coordinates of a cuspidal vector on the rows of `cuspidal`."""
        return mat_vec(self.ring, self.smith.inverse, vector)[self.smith.rank:]

    def restrict_to_cuspidal(self, matrix: Matrix) -> Matrix:
        return [self.cuspidal_coordinates(self.apply(matrix, s)) for s in self.cuspidal]

    def register(self, label: str, operator: Any) -> Dict[str, Any]:
        with self._lock:
            previous = dict(self.operators)
            self.operators[label] = operator
        return previous

    def to_json(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "sign": self.sign,
            "character": None if self.character is None else self.character.to_json(),
            "precision": self.ring.precision,
            "symbols": len(self.symbols),
            "rank": self.rank,
            "cusps": self.cusp_basis.rank,
            "cuspidal_rank": self.cuspidal_rank,
        }


def manin_relations(ring: UnramifiedRing, symbols: ManinSymbols) -> Iterable[Row]:
    one = ring._one
    for i, (c, d) in enumerate(symbols):
        yield _row(ring, [(i, one), (symbols.index(d, -c), one)])
        yield _row(ring, [(i, one), (symbols.index(d, -c - d), one), (symbols.index(-c - d, c), one)])


def star_relations(ring: UnramifiedRing, symbols: ManinSymbols) -> Iterable[Row]:
    for i, (c, d) in enumerate(symbols):
        yield _row(ring, [(i, ring._one), (symbols.index(-c, d), ring._neg(ring._one))])


def character_relations(ring: UnramifiedRing, symbols: ManinSymbols, psi: DirichletCharacter) -> Iterable[Row]:
    M = symbols.level
    for g in CharacterGroup.of(M).generators:
        value = ring._neg(psi.value(g, ring).coeffs)
        for i, (c, d) in enumerate(symbols):
            yield _row(ring, [(symbols.index(g * c, g * d), ring._one), (i, value)])


def _cusp_quotient(ring: UnramifiedRing, symbols: ManinSymbols, sign: int,
                   psi: Optional[DirichletCharacter]) -> Tuple[Tuple[CuspKey, ...], QuotientBasis]:
    M = symbols.level
    found = set()
    for c, d in symbols:
        found.update(symbol_cusps(c, d, M))
    keys = tuple(sorted(found))
    pos = {k: i for i, k in enumerate(keys)}
    rels: List[Row] = []
    if sign:
        for k in keys:
            rels.append(_row(ring, [(pos[k], ring._one), (pos[cusp_star(k, M)], ring._neg(ring._one))]))
    if psi is not None:
        for g in CharacterGroup.of(M).generators:
            value = ring._neg(psi.value(g, ring).coeffs)
            for k in keys:
                rels.append(_row(ring, [(pos[cusp_diamond(k, g, M)], ring._one), (pos[k], value)]))
    return keys, relation_quotient(ring, len(keys), rels)


def build_space(M: int, ring: UnramifiedRing, sign: int = 0,
                character: Optional[DirichletCharacter] = None) -> SymbolSpace:
    """Symbols at level M, optionally cut to the plus quotient and the psi-coinvariants."""
    if sign not in SIGNS:
        raise ValueError(f"sign must be one of {SIGNS}")
    symbols = manin_symbols(M)
    psi = _character_mod(character, M)
    if psi is not None and not psi.is_even() and sign:
        raise ValueError("an odd character has no plus part")
    relations: List[Row] = list(manin_relations(ring, symbols))
    if sign:
        relations.extend(star_relations(ring, symbols))
    if psi is not None:
        relations.extend(character_relations(ring, symbols, psi))
    basis = relation_quotient(ring, len(symbols), relations)

    keys, cusp_basis = _cusp_quotient(ring, symbols, sign, psi)
    pos = {k: i for i, k in enumerate(keys)}
    boundary: Matrix = []
    for g in basis.free:
        c, d = symbols.pairs[g]
        at_oo, at_0 = symbol_cusps(c, d, M)
        combo = _row(ring, [(pos[at_oo], ring._one), (pos[at_0], ring._neg(ring._one))])
        boundary.append(cusp_basis.reduce(combo))
    smith = smith_form(ring, transpose(boundary), ncols=basis.rank)
    if smith.valuations and max(smith.valuations):
        logger.bind(event="boundary_not_saturated", level=M).warning(f"valuations {smith.valuations}")
    space = SymbolSpace(M, ring, sign, psi, symbols, basis, keys, cusp_basis, boundary, smith)
    logger.bind(event="build_space", level=M, sign=sign).info(
        f"{len(symbols)} symbols, rank {space.rank}, {cusp_basis.rank} cusps, cuspidal rank {space.cuspidal_rank}")
    return space
