"""
Finitely presented modules over O = W/p^m and maps between them.

A module is O^ngens modulo the row span of its relations; a map is the matrix of
images of the source generators. Over a discrete valuation ring a submodule is
determined by its Smith invariants, so membership, exactness and orders all
reduce to comparing (free rank, torsion diagonal) pairs.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.padic.errors import Indeterminate
from src.padic.linalg import Matrix, identity, mat_mul, smith_form
from src.padic.ring import Raw, UnramifiedRing

MARGIN = 1


@dataclass(frozen=True)
class ModuleInvariants:
    rank: int
    torsion: Tuple[int, ...]
    degree: int

    @property
    def order_exponent(self) -> Optional[int]:
        """log_p of the order, None when the module is not finite."""
        return None if self.rank else self.degree * sum(self.torsion)

    def to_json(self) -> Dict[str, Any]:
        return {"rank": self.rank, "torsion": list(self.torsion), "order_exponent": self.order_exponent}


def _reduced(ring: UnramifiedRing, rows: Sequence[Sequence[Raw]]) -> Tuple[Tuple[Raw, ...], ...]:
    return tuple(tuple(tuple(x % ring.mod for x in c) for c in row) for row in rows)


@dataclass(frozen=True)
class ModulePresentation:
    """
    - relations: rows of length ngens
    - x_action: optional matrix of X on the generators (rows are images)
    """
    ring: UnramifiedRing
    ngens: int
    relations: Tuple[Tuple[Raw, ...], ...] = ()
    labels: Tuple[str, ...] = ()
    x_action: Optional[Tuple[Tuple[Raw, ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "relations", _reduced(self.ring, self.relations))
        if any(len(row) != self.ngens for row in self.relations):
            raise ValueError(f"relations must have {self.ngens} entries")

    @classmethod
    def free(cls, ring: UnramifiedRing, ngens: int, labels: Sequence[str] = ()) -> "ModulePresentation":
        return cls(ring, ngens, (), tuple(labels))

    @classmethod
    def cyclic(cls, ring: UnramifiedRing, annihilator: Raw, label: str = "1") -> "ModulePresentation":
        """O / (annihilator)."""
        return cls(ring, 1, ((annihilator,),), (label,))

    def invariants(self) -> ModuleInvariants:
        if self.ngens == 0:
            return ModuleInvariants(0, (), self.ring.degree)
        vals = smith_form(self.ring, [list(r) for r in self.relations], self.ngens, track=False).valuations
        if vals and max(vals) > self.ring.precision - MARGIN - 1:
            raise Indeterminate(f"diagonal entry p^{max(vals)} is too close to the precision cap p^{self.ring.precision}")
        return ModuleInvariants(self.ngens - len(vals), tuple(sorted(v for v in vals if v > 0)), self.ring.degree)

    def with_relations(self, extra: Sequence[Sequence[Raw]]) -> "ModulePresentation":
        return ModulePresentation(self.ring, self.ngens, self.relations + _reduced(self.ring, extra), self.labels)

    def contains(self, vectors: Sequence[Sequence[Raw]]) -> bool:
        """Every vector lies in the relation span, i.e. is zero in the module."""
        return self.with_relations(vectors).invariants() == self.invariants()

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"generators": list(self.labels) or self.ngens, **self.invariants().to_json()}
        return out


@dataclass(frozen=True)
class PresentedMap:
    """source -> target, matrix[i] = image of source generator i in target coordinates."""
    source: ModulePresentation
    target: ModulePresentation
    matrix: Tuple[Tuple[Raw, ...], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "matrix", _reduced(self.target.ring, self.matrix))
        if len(self.matrix) != self.source.ngens or any(len(r) != self.target.ngens for r in self.matrix):
            raise ValueError(f"{self.name or 'map'} has the wrong shape")

    @property
    def ring(self) -> UnramifiedRing:
        return self.target.ring

    @classmethod
    def identity(cls, module: ModulePresentation, target: Optional[ModulePresentation] = None,
                 name: str = "") -> "PresentedMap":
        return cls(module, target or module, tuple(tuple(r) for r in identity(module.ring, module.ngens)), name)

    def images(self, vectors: Sequence[Sequence[Raw]]) -> Matrix:
        if not vectors:
            return []
        if not self.matrix:
            return [[self.ring._zero] * self.target.ngens for _ in vectors]
        return mat_mul(self.ring, vectors, self.matrix)

    def well_defined(self) -> bool:
        """Source relations land in the target relations."""
        return self.target.contains(self.images(self.source.relations))

    def image_module(self) -> ModulePresentation:
        return self.target.with_relations(self.matrix)

    def cokernel(self) -> ModulePresentation:
        return self.image_module()

    def image_rank(self) -> int:
        return self.target.invariants().rank - self.cokernel().invariants().rank

    def is_zero(self) -> bool:
        return self.target.contains(self.matrix)

    def is_surjective(self) -> bool:
        inv = self.cokernel().invariants()
        return inv.rank == 0 and not inv.torsion

    def is_injective(self) -> bool:
        """Valid for torsion-free sources: injective iff no rank is lost."""
        src = self.source.invariants()
        if src.torsion:
            raise Indeterminate(f"injectivity of {self.name or 'map'} from a module with torsion {list(src.torsion)}")
        return src.rank == self.image_rank()

    def index_exponent(self) -> Optional[int]:
        """log_p of the cokernel order."""
        return self.cokernel().invariants().order_exponent

    def then(self, other: "PresentedMap") -> "PresentedMap":
        """other o self."""
        return PresentedMap(self.source, other.target, tuple(tuple(r) for r in other.images(self.matrix)),
                            f"{other.name}*{self.name}")

    def minus(self, other: "PresentedMap") -> "PresentedMap":
        rows = tuple(tuple(self.ring._sub(x, y) for x, y in zip(a, b)) for a, b in zip(self.matrix, other.matrix))
        return PresentedMap(self.source, self.target, rows, f"{self.name}-{other.name}")

    def scaled(self, c: Raw) -> "PresentedMap":
        rows = tuple(tuple(self.ring._mul(x, c) for x in r) for r in self.matrix)
        return PresentedMap(self.source, self.target, rows, self.name)


@dataclass(frozen=True)
class ExactnessReport:
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> Dict[str, Any]:
        return {"ok": self.ok, "checks": dict(self.checks), **self.details}


def short_exact(first: PresentedMap, second: PresentedMap) -> ExactnessReport:
    """0 -> A -first-> B -second-> C -> 0 for a torsion-free A."""
    report = ExactnessReport()
    report.checks["first_well_defined"] = first.well_defined()
    report.checks["second_well_defined"] = second.well_defined()
    report.checks["composite_zero"] = first.then(second).is_zero()
    report.checks["injective"] = first.is_injective()
    report.checks["surjective"] = second.is_surjective()
    report.checks["middle_exact"] = first.cokernel().invariants() == second.target.invariants()
    report.details["invariants"] = {
        "left": first.source.invariants().to_json(),
        "middle": first.target.invariants().to_json(),
        "right": second.target.invariants().to_json(),
    }
    return report
