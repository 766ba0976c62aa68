"""
Norm-compatible systems (u_r) in the layers W[zeta_{p^r}] and their Coleman series.

Kinds:
- cyclotomic(N, a): u_r = 1 - Fr^-r(zeta_N^a) zeta_{p^r}, with closed form f = 1 - zeta_N^a (1 + T)
- constant(d, k): u_r = Fr^-r(zeta_d^k), with f = zeta_d^k
- explicit: layers given directly; f is recovered by CRT over the factors Phi_{p^j}(1 + T)

An explicit system may carry a ground anchor u_0 = f(0); with it the recovery is
modulo (1+T)^(p^r) - 1, without it modulo ((1+T)^(p^r) - 1) / T.
"""
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

from loguru import logger

from src.characters.dirichlet import DirichletCharacter
from src.padic.errors import NonDivisible
from src.padic.ring import ExtScalar, Raw, UnramifiedRing
from src.padic.scalar import int_valuation
from src.series.power_series import PowerSeries

from .errors import InsufficientLayers, NormFailure
from .layers import CyclotomicLayer, Layer, x_to_t

KINDS = ("cyclotomic", "constant", "explicit")


@dataclass(frozen=True)
class NormSystem:
    """
    - layers: u_1, ..., u_rmax on the power bases of their layers
    - anchor: optional u_0 in W
    - closed_form: the Coleman series when it is known in closed form
    """
    ring: UnramifiedRing
    kind: str
    layers: Tuple[Layer, ...]
    precision: int
    anchor: Optional[Raw] = None
    closed_form: Optional[PowerSeries] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def r_max(self) -> int:
        return len(self.layers)

    def layer(self, r: int) -> CyclotomicLayer:
        return CyclotomicLayer.of(self.ring, r)

    def u(self, r: int) -> Layer:
        return self.layers[r - 1]

    # construction -------------------------------------------------------

    @classmethod
    def cyclotomic(cls, ring: UnramifiedRing, N: int, a: int = 1, r_max: int = 2) -> "NormSystem":
        c = ring.root_of_unity(N, a).coeffs
        layers = []
        for r in range(1, r_max + 1):
            layer = CyclotomicLayer.of(ring, r)
            twisted = ring._frobenius(c, -r)
            layers.append(layer.sub(layer.one(), layer.scale(layer.y_power(1), twisted)))
        one_minus_c = ring._sub(ring._one, c)
        f = PowerSeries(ring, (one_minus_c, ring._neg(c)), ring.precision)
        return cls(ring, "cyclotomic", tuple(layers), ring.precision, one_minus_c, f, {"N": N, "a": a})

    @classmethod
    def constant(cls, ring: UnramifiedRing, d: int, k: int = 1, r_max: int = 2) -> "NormSystem":
        zeta = ring.root_of_unity(d, k).coeffs
        layers = tuple(CyclotomicLayer.of(ring, r).from_base(ring._frobenius(zeta, -r)) for r in range(1, r_max + 1))
        f = PowerSeries(ring, (zeta,), ring.precision)
        return cls(ring, "constant", layers, ring.precision, zeta, f, {"d": d, "k": k})

    @classmethod
    def explicit(cls, ring: UnramifiedRing, layers: Sequence[Layer], precision: Optional[int] = None,
                 anchor: Optional[Raw] = None) -> "NormSystem":
        prec = ring.precision if precision is None else min(precision, ring.precision)
        return cls(ring, "explicit", tuple(tuple(u) for u in layers), prec, anchor)

    @classmethod
    def from_series(cls, f: PowerSeries, r_max: int, anchored: bool = True) -> "NormSystem":
        """u_r = Fr^-r(f)(zeta_{p^r} - 1), with f read as the polynomial of its known coefficients."""
        ring = f.ring
        layers = []
        for r in range(1, r_max + 1):
            layer = CyclotomicLayer.of(ring, r)
            layers.append(layer.eval_poly_t([ring._frobenius(c, -r) for c in f.coeffs]))
        anchor = f.coeffs[0] if anchored else None
        return cls.explicit(ring, layers, f.precision, anchor)

    def product(self, other: "NormSystem") -> "NormSystem":
        """Layerwise product of two systems over the same ring."""
        if other.ring is not self.ring or other.r_max != self.r_max:
            raise ValueError("systems must share the ring and the number of layers")
        W = self.ring
        layers = tuple(self.layer(r).mul(self.u(r), other.u(r)) for r in range(1, self.r_max + 1))
        both = self.anchor is not None and other.anchor is not None
        anchor = W._mul(self.anchor, other.anchor) if both else None
        closed = None
        if self.closed_form is not None and other.closed_form is not None:
            prec = min(self.closed_form.precision, other.closed_form.precision)
            coeffs = _poly_mul(W, self.closed_form.coeffs, other.closed_form.coeffs)
            closed = PowerSeries(W, tuple(coeffs), prec)
        kind = "explicit" if closed is None else self.kind
        params = {"factors": [self.params or self.kind, other.params or other.kind]}
        return NormSystem(W, kind, layers, min(self.precision, other.precision), anchor, closed, params)

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "params": self.params,
            "r_max": self.r_max,
            "precision": self.precision,
            "anchored": self.anchor is not None,
        }


def cyclotomic_family(ring: UnramifiedRing, N: int, theta: DirichletCharacter,
                      r_max: int = 1) -> List[Tuple[ExtScalar, NormSystem]]:
    """(theta^-1(a), cyclotomic(N, a)) for a in (Z/N)^x: the theta-fold of the zeta system."""
    inv = theta.inverse()
    out = []
    for a in range(1, N):
        w = inv.value(a, ring)
        if w.is_zero():
            continue
        out.append((w, NormSystem.cyclotomic(ring, N, a, r_max)))
    return out


# norm compatibility -------------------------------------------------------

def check_norms(system: NormSystem) -> Dict[str, Any]:
    """N_{r+1 -> r}(u_{r+1}) = u_r for every stored pair, and N_{1 -> 0}(u_1) = u_0 / Fr^-1(u_0) when anchored."""
    W, prec = system.ring, system.precision
    reasons: List[str] = []
    checked = []
    for r in range(1, system.r_max):
        upper = system.layer(r + 1)
        try:
            normed = upper.norm_down(system.u(r + 1))
            ok = system.layer(r).agrees(normed, system.u(r), prec)
        except NormFailure as exc:
            ok = False
            reasons.append(str(exc))
        checked.append({"from": r + 1, "to": r, "ok": ok})
        if not ok:
            reasons.append(f"N({r + 1} -> {r}) does not match u_{r}")
    if system.anchor is not None and system.r_max >= 1 and W._is_unit(system.anchor):
        try:
            ground = system.layer(1).norm_to_ground(system.u(1))
            expected = W._mul(system.anchor, W._inv(W._frobenius(system.anchor, -1)))
            ok = all((x - y) % W.p ** prec == 0 for x, y in zip(ground, expected))
        except NormFailure as exc:
            ok = False
            reasons.append(str(exc))
        checked.append({"from": 1, "to": 0, "ok": ok})
        if not ok:
            reasons.append("N(1 -> 0)(u_1) differs from u_0 / Fr^-1(u_0)")
    return {"ok": not reasons, "reasons": reasons, "checked": checked}


def require_norms(system: NormSystem) -> None:
    result = check_norms(system)
    if not result["ok"]:
        raise NormFailure("; ".join(result["reasons"]))


# Coleman series -------------------------------------------------------

@dataclass(frozen=True)
class ColemanSeries:
    """
    - series: f in T, exact (closed form) or known modulo the recovery modulus
    - layers: r of the recovery modulus, None for a closed form
    - anchored: whether the modulus includes the factor T
    - pole: f(0) is not a unit (the p-unit case)
    """
    series: PowerSeries
    layers: Optional[int]
    anchored: bool
    pole: bool
    audit: Tuple[Dict[str, Any], ...] = ()

    @property
    def ring(self) -> UnramifiedRing:
        return self.series.ring

    @property
    def modulus_degree(self) -> Optional[int]:
        if self.layers is None:
            return None
        q = self.ring.p ** self.layers
        return q if self.anchored else q - 1

    def constant_term(self) -> ExtScalar:
        return self.series[0]

    def certified_precision(self, n: int) -> int:
        """Largest m with f known modulo (p^m, T^n)."""
        if self.layers is None:
            return self.series.precision
        deg = self.modulus_degree
        if n > deg:
            raise InsufficientLayers(f"T^{n} needs more than {self.layers} layers (modulus degree {deg})")
        q = self.ring.p ** self.layers
        shift = 0 if self.anchored else 1
        vals = [int_valuation(comb(q, i + shift), self.ring.p) for i in range(n) if i + shift > 0]
        return min([self.series.precision] + vals)

    def certified(self, m: int, n: int) -> PowerSeries:
        """f modulo (p^m, T^n)."""
        have = self.certified_precision(n)
        if have < m:
            raise InsufficientLayers(f"f is known to p^{have} modulo T^{n}, asked for p^{m}")
        coeffs = list(self.series.coeffs[:n]) + [self.ring._zero] * max(0, n - self.series.trunc)
        return PowerSeries(self.ring, tuple(coeffs), m)

    def to_json(self) -> Dict[str, Any]:
        return {
            "series": self.series.to_json(),
            "layers": self.layers,
            "anchored": self.anchored,
            "pole": self.pole,
            "audit": list(self.audit),
        }


def _poly_add(W: UnramifiedRing, a: Sequence[Raw], b: Sequence[Raw]) -> List[Raw]:
    n = max(len(a), len(b))
    a = list(a) + [W._zero] * (n - len(a))
    b = list(b) + [W._zero] * (n - len(b))
    return [W._add(x, y) for x, y in zip(a, b)]


def _poly_mul(W: UnramifiedRing, a: Sequence[Raw], b: Sequence[Raw]) -> List[Raw]:
    out = [W._zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not any(x):
            continue
        for j, y in enumerate(b):
            if any(y):
                out[i + j] = W._add(out[i + j], W._mul(x, y))
    return out


def _int_poly(W: UnramifiedRing, coeffs: Sequence[int]) -> List[Raw]:
    return [W._from_int(c) for c in coeffs]


def _inverse_factor(layer: CyclotomicLayer, with_y_minus_one: bool) -> Layer:
    """p / (zeta_p - 1), times (Y - 1) when the modulus omits the factor at Y = 1."""
    acc = layer.one()
    if with_y_minus_one:
        acc = layer.sub(layer.y_power(1), layer.one())
    for a in range(2, layer.p):
        acc = layer.mul(acc, layer.sub(layer.y_power(a * layer.step), layer.one()))
    return acc


def _recover(system: NormSystem) -> Tuple[List[Raw], int]:
    """CRT over the layers; returns F in x = 1 + T and its precision."""
    W, p = system.ring, system.p
    prec = system.precision
    anchored = system.anchor is not None
    if anchored:
        F: List[Raw] = [system.anchor]
        omega = _int_poly(W, [-1, 1])
        start = 1
    else:
        F = list(W._frobenius(c, 1) for c in system.u(1))
        omega = _int_poly(W, [1] * p)
        start = 2
    for r in range(start, system.r_max + 1):
        layer = system.layer(r)
        target = layer.frobenius(system.u(r), r)
        diff = layer.sub(target, layer.eval_poly_x(F))
        h = layer.mul(diff, _inverse_factor(layer, not anchored))
        try:
            h = layer.divide_by_p(h)
        except NonDivisible as exc:
            raise NormFailure(f"layer {r} is not congruent to the lower layers; the system is not norm compatible") from exc
        prec -= 1
        F = _poly_add(W, F, _poly_mul(W, omega, list(h)))
        q = p ** r
        omega = _int_poly(W, [-1] + [0] * (q - 1) + [1]) if anchored else _int_poly(W, [1] * q)
    degree = p ** system.r_max - (0 if anchored else 1)
    F = (F + [W._zero] * degree)[:degree]
    return F, prec


def coleman_series(system: NormSystem) -> ColemanSeries:
    """The Coleman series of a norm-compatible system, audited at every stored layer."""
    require_norms(system)
    W = system.ring
    if system.closed_form is not None:
        f = system.closed_form
        x_coeffs = None
        layers = None
        anchored = True
        prec = system.precision
    else:
        if system.r_max < 1:
            raise InsufficientLayers("an explicit system needs at least one layer")
        x_coeffs, prec = _recover(system)
        if prec <= 0:
            raise InsufficientLayers(f"{system.r_max} layers exhaust precision {system.precision}")
        f = PowerSeries(W, tuple(x_to_t(W, x_coeffs)), prec)
        layers = system.r_max
        anchored = system.anchor is not None

    audit = []
    for r in range(1, system.r_max + 1):
        layer = system.layer(r)
        value = layer.eval_poly_x(x_coeffs) if x_coeffs is not None else layer.eval_poly_t(f.coeffs)
        ok = layer.agrees(value, layer.frobenius(system.u(r), r), prec)
        audit.append({"r": r, "precision": prec, "ok": ok})
        if not ok:
            raise NormFailure(f"f(zeta_{{p^{r}}} - 1) differs from Fr^{r}(u_{r}) at p^{prec}")
    if system.anchor is not None:
        ok = all((x - y) % W.p ** prec == 0 for x, y in zip(f.coeffs[0], system.anchor))
        audit.append({"r": 0, "precision": prec, "ok": ok})
        if not ok:
            raise NormFailure("f(0) differs from the anchor u_0")
    pole = not W._is_unit(f.coeffs[0])
    logger.bind(event="coleman_series", kind=system.kind, p=system.p).debug(
        f"{len(audit)} layer audits at p^{prec}, modulus layers={layers}")
    return ColemanSeries(f, layers, anchored, pole, tuple(audit))
