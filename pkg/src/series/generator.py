from dataclasses import dataclass
from fractions import Fraction

from src.padic.analysis import padic_exp, padic_log
from src.padic.scalar import PadicScalar

MODES = ("simple", "normalized")


@dataclass(frozen=True, eq=False)
class Generator:
    """
    Topological generator t of 1 + pZ_p.
    - simple: t = 1 + p
    - normalized: (1 - 1/p) log t = 1, i.e. t = exp(p/(p-1))
    """
    t: PadicScalar
    mode: str = "simple"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown generator mode {self.mode!r}")
        p = self.t.prime
        if (self.t.value - 1) % p or (self.t.precision > 1 and (self.t.value - 1) % (p * p) == 0):
            raise ValueError(f"{self.t!r} does not generate 1 + {p}Z_{p}")

    @classmethod
    def build(cls, p: int, precision: int, mode: str = "simple") -> "Generator":
        if mode == "simple":
            return cls(PadicScalar(1 + p, p, precision), mode)
        if mode == "normalized":
            x = PadicScalar.from_fraction(Fraction(p, p - 1), p, precision)
            return cls(padic_exp(x), mode)
        raise ValueError(f"unknown generator mode {mode!r}")

    @property
    def p(self) -> int:
        return self.t.prime

    @property
    def precision(self) -> int:
        return self.t.precision

    def at_precision(self, precision: int) -> "Generator":
        return Generator.build(self.p, precision, self.mode)

    def power(self, s: int) -> PadicScalar:
        return self.t ** s

    def node(self, s: int) -> PadicScalar:
        """t^s - 1."""
        return self.power(s) - 1

    def log(self) -> PadicScalar:
        return padic_log(self.t)

    def to_json(self):
        return {"mode": self.mode, "t": str(self.t.value), "precision": self.precision}

    def __repr__(self) -> str:
        return f"Generator({self.mode}, t={self.t.value} + O({self.p}^{self.precision}))"
