"""
Intermediate modules between A[[X]] and the Coleman image, for A = O with sigma
acting by multiplication by a unit s.

Given alpha in O[[X]] with mu = 0 and Weierstrass polynomial P of degree lambda:
- F        = X^-1 A[[X]] when A^(sigma=1) = A (pole case), A[[X]] otherwise
- Q        = X P, so that F / alpha F is read on O[X]/(Q) through multiplication by X in the pole case
- F^dagger = F / X alpha F, free of rank lambda + 1 with X acting by the companion matrix of Q
- F^star   = (F^dagger + D) / (alpha * d - epsilon * d), epsilon = 1 - s^-1
- A-bar    = O / epsilon

and 0 -> F^dagger -> F^star -> A-bar -> 0.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from loguru import logger

from src.padic.errors import Indeterminate
from src.padic.ring import ExtScalar, Raw, UnramifiedRing
from src.series.power_series import PowerSeries
from src.series.weierstrass import WeierstrassData, weierstrass_data

from .presentation import ExactnessReport, ModulePresentation, PresentedMap, short_exact


@dataclass(frozen=True)
class SigmaAction:
    """A = O with sigma = multiplication by s."""
    ring: UnramifiedRing
    s: ExtScalar
    label: str = ""

    @classmethod
    def trivial(cls, ring: UnramifiedRing) -> "SigmaAction":
        return cls(ring, ring.one(), "trivial")

    @classmethod
    def scalar(cls, ring: UnramifiedRing, s: ExtScalar, label: str = "") -> "SigmaAction":
        if not s.is_unit():
            raise ValueError(f"sigma must act by a unit, got {s!r}")
        return cls(ring, s.lift_to(ring), label)

    @property
    def epsilon(self) -> ExtScalar:
        """1 - sigma^-1."""
        return self.ring.one() - self.s.inverse()

    @property
    def fixed(self) -> bool:
        """A^(sigma=1) = A."""
        return self.epsilon.is_zero()

    def to_json(self) -> Dict[str, Any]:
        return {"label": self.label, "s": self.s.to_json(), "fixed": self.fixed}


def companion(ring: UnramifiedRing, monic: Tuple[Raw, ...]) -> Tuple[Tuple[Raw, ...], ...]:
    """Rows are X * X^i modulo the monic polynomial (coefficients low to high)."""
    d = len(monic) - 1
    rows = []
    for i in range(d):
        if i + 1 < d:
            rows.append(tuple(ring._one if j == i + 1 else ring._zero for j in range(d)))
        else:
            rows.append(tuple(ring._neg(c) for c in monic[:d]))
    return tuple(rows)


def quotient_image(alpha: PowerSeries, Q: PowerSeries, shift: bool) -> PowerSeries:
    """alpha (times X when shift) modulo Q."""
    source = alpha.multiply_by_x() if shift else alpha
    return source.reduce_mod(Q)


@dataclass(frozen=True)
class IntermediateModules:
    """
    - pole: F carries the X^-1 part
    - weierstrass: data of alpha
    - const: image of D -> F^dagger, d -> alpha * d
    - iota / proj: F^dagger -> F^star -> A-bar
    - z_quo: D -> F^star, the class of (0, d)
    """
    action: SigmaAction
    alpha: PowerSeries
    weierstrass: WeierstrassData
    pole: bool
    fdag: ModulePresentation
    adag: ModulePresentation
    fstar: ModulePresentation
    abar: ModulePresentation
    dmod: ModulePresentation
    const: PresentedMap
    iota: PresentedMap
    proj: PresentedMap
    z_quo: PresentedMap

    @property
    def ring(self) -> UnramifiedRing:
        return self.fdag.ring

    @property
    def epsilon(self) -> Raw:
        return self.action.epsilon.lift_to(self.ring).coeffs

    def sequence(self) -> ExactnessReport:
        """0 -> F^dagger -> F^star -> A-bar -> 0, with the orders multiplying."""
        report = short_exact(self.iota, self.proj)
        index = self.iota.index_exponent()
        report.details["index_exponent"] = index
        report.checks["orders_multiply"] = index == self.abar.invariants().order_exponent
        return report

    def split_check(self) -> ExactnessReport:
        """sigma trivial: the relation vanishes, F^star = F^dagger + D and F^dagger = A^dagger."""
        report = ExactnessReport()
        report.checks["relation_vanishes"] = all(not any(c) for row in self.fstar.relations for c in row)
        inv = self.fstar.invariants()
        report.checks["free_of_rank"] = inv.rank == self.fdag.ngens + 1 and not inv.torsion
        shift = PresentedMap.identity(self.fdag, self.adag, "X")
        report.checks["fdag_is_adag"] = shift.is_injective() and shift.is_surjective()
        report.details["rank"] = inv.rank
        return report

    def pushout_map(self) -> PresentedMap:
        """F^star -> O[X]/(Q): (y, d) -> epsilon y + alpha d."""
        O = self.ring
        eps = self.epsilon
        rows = [tuple(O._mul(eps, x) for x in row) for row in PresentedMap.identity(self.fdag).matrix]
        rows.append(self.const.matrix[0])
        return PresentedMap(self.fstar, self.adag, tuple(rows), "Psi")

    def simple_check(self) -> ExactnessReport:
        """epsilon a unit-free nonzero scalar: F^star embeds into O[X]/(Q) and iota becomes epsilon."""
        report = ExactnessReport()
        psi = self.pushout_map()
        report.checks["well_defined"] = psi.well_defined()
        report.checks["injective"] = psi.is_injective()
        composite = self.iota.then(psi)
        expected = PresentedMap.identity(self.fdag, self.adag).scaled(self.epsilon)
        report.checks["iota_is_epsilon"] = composite.minus(expected).is_zero()
        report.details["ideal_index"] = psi.index_exponent()
        return report

    def z_quo_check(self) -> ExactnessReport:
        """proj o z_quo is the canonical surjection and epsilon z_quo = iota o const."""
        report = ExactnessReport()
        canonical = PresentedMap.identity(self.dmod, self.abar, "can")
        report.checks["lifts_canonical"] = self.z_quo.then(self.proj).minus(canonical).is_zero()
        pushout = self.z_quo.scaled(self.epsilon).minus(self.const.then(self.iota))
        report.checks["pushout_square"] = pushout.is_zero()
        return report

    def to_json(self) -> Dict[str, Any]:
        return {
            "action": self.action.to_json(),
            "pole": self.pole,
            "lambda": self.weierstrass.lam,
            "precision": self.ring.precision,
            "F_dagger": self.fdag.to_json(),
            "F_star": self.fstar.to_json(),
            "A_bar": self.abar.to_json(),
        }


def intermediate_modules(alpha: PowerSeries, action: SigmaAction, precision: Optional[int] = None) -> IntermediateModules:
    """The modules and maps for alpha with mu(alpha) = 0."""
    data = weierstrass_data(alpha)
    if data.mu:
        raise ValueError(f"alpha has mu = {data.mu}; the intermediate modules need mu = 0")
    lam = data.lam
    W = alpha.ring
    Q = PowerSeries(W, (W._zero,) + data.distinguished.coeffs, data.distinguished.precision)
    pole = action.fixed
    image = quotient_image(alpha, Q, pole)
    prec = min(image.precision, action.s.precision, alpha.precision)
    if precision is not None:
        prec = min(prec, precision)
    O = W.with_precision(prec)

    def low(c: Raw) -> Raw:
        return tuple(x % O.mod for x in c)

    d = lam + 1
    xlabels = tuple(f"X^{i - 1 if pole else i}" for i in range(d))
    x_act = companion(O, tuple(low(c) for c in Q.coeffs))
    fdag = ModulePresentation(O, d, (), xlabels, x_act)
    adag = ModulePresentation(O, d, (), tuple(f"X^{i}" for i in range(d)), x_act)
    const_vec = tuple(low(c) for c in (list(image.coeffs) + [O._zero] * d)[:d])
    eps = low(action.epsilon.coeffs)
    fstar = ModulePresentation(O, d + 1, (const_vec + (O._neg(eps),),), xlabels + ("d",))
    abar = ModulePresentation.cyclic(O, eps, "1")
    dmod = ModulePresentation.free(O, 1, ("d",))

    unit_rows = [tuple(O._one if i == j else O._zero for j in range(d + 1)) for i in range(d)]
    iota = PresentedMap(fdag, fstar, tuple(unit_rows), "iota")
    proj = PresentedMap(fstar, abar, tuple((O._zero,) for _ in range(d)) + ((O._one,),), "proj")
    const = PresentedMap(dmod, fdag, (const_vec,), "alpha")
    z_quo = PresentedMap(dmod, fstar, ((O._zero,) * d + (O._one,),), "z_quo")
    logger.bind(event="intermediate_modules").debug(f"lambda={lam} pole={pole} precision={prec}")
    return IntermediateModules(action, alpha, data, pole, fdag, adag, fstar, abar, dmod, const, iota, proj, z_quo)


# the four-term sequence -------------------------------------------------------

def four_term_sequence(xi: PowerSeries) -> Dict[str, Any]:
    """
    0 -> R[xi(0)] -> Lambda/xi -X-> F/xi F -> R/xi(0) -> 0 for trivial sigma, with
    Lambda/xi = O[X]/(P) and F/xi F read on O[X]/(P) through multiplication by X.
    """
    data = weierstrass_data(xi)
    if data.mu:
        raise ValueError(f"xi has mu = {data.mu}")
    lam = data.lam
    W = xi.ring
    prec = min(data.precision, xi.precision)
    O = W.with_precision(prec)
    xi0 = tuple(x % O.mod for x in xi.coeffs[0])
    v0 = O._val(xi0, prec)
    left = ModulePresentation.free(O, 0)
    if v0 >= prec:
        raise Indeterminate(f"xi(0) vanishes modulo p^{prec}; R[xi(0)] is not certified")
    quotient = ModulePresentation.free(O, lam, tuple(f"X^{i}" for i in range(lam)))
    fquot = ModulePresentation.free(O, lam, tuple(f"X^{i - 1}" for i in range(lam)))
    right = ModulePresentation.cyclic(O, xi0, "1")
    P = tuple(tuple(x % O.mod for x in c) for c in data.distinguished.coeffs)
    mult_x = PresentedMap(quotient, fquot, companion(O, P) if lam else (), "X")
    ev = PresentedMap(fquot, right, tuple((O._one if i == 0 else O._zero,) for i in range(lam)), "res")
    if lam:
        report = short_exact(mult_x, ev)
    else:
        report = ExactnessReport({"right_vanishes": right.invariants().order_exponent == 0})
    index = mult_x.index_exponent() if lam else 0
    report.checks["alternating_orders"] = index == O.degree * v0
    report.details.update({
        "lambda": lam,
        "xi0_valuation": v0,
        "index_exponent": index,
        "end_terms": {"left": left.invariants().to_json(), "right": right.invariants().to_json()},
    })
    return report.to_json()

