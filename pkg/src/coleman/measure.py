"""
The measure attached to a Coleman series f, through its Amice transform
q = (1 - phi/p) log f with phi(h)(T) = h^Fr((1 + T)^p - 1).

With D = (1 + T) d/dT, Dq = g - phi(g^Fr) for g = (1 + T) f'/f, so q is recovered
from Dq and the constant term q(0) = (1 - Fr/p) log f(0). Moments are
int x^s dmu = (D^s q)(0); the restriction to b + pZ_p is read off at the points
zeta_p^j - 1 of W[zeta_p].
"""
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger
from sympy.functions.combinatorial.numbers import stirling

from src.characters.dirichlet import DirichletCharacter, teichmuller_character
from src.jobs.pool import map_ordered
from src.padic.analysis import _ilog, log_unit
from src.padic.errors import ConvergenceDomain, NonDivisible, PrecisionExhausted
from src.padic.ramified import RamifiedRing, RamifiedScalar
from src.padic.ring import ExtScalar, UnramifiedRing
from src.series.generator import Generator
from src.series.newton import Interpolation, interpolate, working_precision
from src.series.power_series import PowerSeries

from .errors import TraceNotZero
from .norm_system import ColemanSeries

GUARD_NODES = 2

Weighted = Sequence[Tuple[ExtScalar, ColemanSeries]]


@dataclass(frozen=True)
class MeasurePlan:
    """Sizes for certifying (p^m, X^n) of the moment series."""
    p: int
    m: int
    n: int
    nodes: int
    work: int
    trunc: int
    ring_precision: int

    @classmethod
    def of(cls, p: int, m: int, n: int) -> "MeasurePlan":
        K = m + n - 1
        work = working_precision(p, m, K + GUARD_NODES)
        trunc = (work + 2) * (p - 1) + K + GUARD_NODES
        return cls(p, m, n, K, work, trunc, work + 2 + _ilog(trunc, p))


def x_derivative(h: PowerSeries) -> PowerSeries:
    """(1 + T) h'."""
    return h.derivative() + h.derivative().multiply_by_x().truncate(h.trunc - 1)


def phi(h: PowerSeries) -> PowerSeries:
    """h((1 + T)^p - 1), coefficients untouched."""
    p = h.p
    inner = PowerSeries.from_coefficients(h.ring, [0] + [comb(p, i) for i in range(1, p + 1)], trunc=h.trunc)
    return h.compose(inner)


def log_derivative(f: PowerSeries) -> PowerSeries:
    """(1 + T) f'/f, known to one coefficient less than f."""
    n = f.trunc - 1
    return x_derivative(f).truncate(n) * f.truncate(n).inverse()


@dataclass(frozen=True)
class ColemanMeasure:
    """
    - transform: q, the Amice transform (Mahler coefficients q_k)
    - checks: psi-route and trace-zero audits made at construction
    """
    ring: UnramifiedRing
    transform: PowerSeries
    checks: Tuple[Dict[str, Any], ...] = ()
    label: str = ""
    _powers: List[PowerSeries] = field(default_factory=list, compare=False, repr=False)

    @property
    def p(self) -> int:
        return self.ring.p

    def mass(self) -> ExtScalar:
        return self.transform[0]

    def iterate(self, s: int) -> PowerSeries:
        """D^s q."""
        if not self._powers:
            self._powers.append(self.transform)
        while len(self._powers) <= s:
            self._powers.append(x_derivative(self._powers[-1]))
        return self._powers[s]

    def moment(self, s: int) -> ExtScalar:
        """int x^s dmu."""
        return self.iterate(s)[0]

    def mahler_moment(self, s: int) -> ExtScalar:
        """sum_k S(s, k) k! q_k, the same moment from the Mahler coefficients."""
        acc = self.ring.zero(self.transform.precision)
        fact = 1
        for k in range(0, s + 1):
            if k:
                fact *= k
            c = int(stirling(s, k, kind=2)) * fact
            if c:
                acc = acc + self.transform[k] * c
        return acc

    def values_at_roots(self, s: int) -> List[RamifiedScalar]:
        """(D^s q)(zeta_p^j - 1) for j = 0, ..., p - 1."""
        h = self.iterate(s)
        R = RamifiedRing.over(self.ring)
        out = [R.from_base(h[0])]
        for j in range(1, self.p):
            point = R.zeta_p(j) - R.from_base(self.ring.one())
            out.append(R.evaluate(h.coeffs, point, h.precision))
        return out

    def class_moments(self, s: int) -> List[ExtScalar]:
        """int_{b + pZ_p} x^s dmu for b = 1, ..., p - 1."""
        values = self.values_at_roots(s)
        R = RamifiedRing.over(self.ring)
        out = []
        for b in range(1, self.p):
            acc = values[0]
            for j in range(1, self.p):
                acc = acc + values[j] * R.zeta_p(-b * j)
            try:
                out.append(acc.divide_by_p().to_base())
            except (NonDivisible, ValueError) as exc:
                raise TraceNotZero(f"restriction to {b} + pZ_p of the degree-{s} moment is not in W") from exc
        return out

    def twisted_moment(self, s: int, j: int = 0, omega: Optional[DirichletCharacter] = None) -> ExtScalar:
        """int omega(x)^(j - s) x^s dmu over Z_p^x."""
        omega = omega or teichmuller_character(self.ring)
        twist = omega.power(j - s)
        acc = None
        for b, part in enumerate(self.class_moments(s), start=1):
            term = part * twist.value(b, self.ring)
            acc = term if acc is None else acc + term
        return acc

    def to_json(self) -> Dict[str, Any]:
        return {"label": self.label, "transform": self.transform.to_json(), "checks": list(self.checks)}


def _as_weighted(source: Union[ColemanSeries, Weighted], ring: UnramifiedRing) -> Weighted:
    if isinstance(source, ColemanSeries):
        return [(ring.one(), source)]
    return list(source)


def _trace(values: Sequence[RamifiedScalar]) -> RamifiedScalar:
    acc = values[0]
    for v in values[1:]:
        acc = acc + v
    return acc


def coleman_measure(source: Union[ColemanSeries, Weighted], trunc: int, checks: int = 3,
                    label: str = "") -> ColemanMeasure:
    """
    The measure of f (or of sum_i w_i f_i, folded before phi) with transform known to X^trunc.
    Every f_i(0) must be a unit.
    """
    first = source if isinstance(source, ColemanSeries) else source[0][1]
    ring = first.ring
    parts = _as_weighted(source, ring)
    prec = min(f.certified_precision(trunc + 1) for _, f in parts)

    G = GF = None
    mass = ring.zero(prec)
    for w, f in parts:
        if f.pole:
            raise ConvergenceDomain(f"f(0) = {f.constant_term()!r} is not a unit")
        series = f.certified(prec, trunc + 1)
        g = log_derivative(series)
        g_w, gf_w = g.scale_by(w), g.frobenius().scale_by(w)
        G = g_w if G is None else G + g_w
        GF = gf_w if GF is None else GF + gf_w
        log0 = log_unit(series[0])
        mass = mass + w * (log0 - log0.frobenius().divide_by_p())

    Dq = G - phi(GF)
    # q_k = [T^(k-1)] (Dq / (1 + T)) / k
    W = ring
    mod = W.p ** Dq.precision
    integrand, run = [], W._zero
    for c in Dq.coeffs:
        run = W._sub(c, run, mod)
        integrand.append(run)
    coeffs = [mass.coeffs]
    loss = 0
    for k in range(1, Dq.trunc + 1):
        c = ExtScalar(W, integrand[k - 1], Dq.precision)
        try:
            coeffs.append((c / k).coeffs)
        except NonDivisible as exc:
            raise TraceNotZero(f"[T^{k - 1}] of Dq/(1+T) is not divisible by {k}") from exc
        loss = max(loss, _ilog(k, W.p))
    q_prec = min(Dq.precision - loss, mass.precision)
    if q_prec <= 0:
        raise PrecisionExhausted("the transform lost all precision")
    q = PowerSeries(W, tuple(coeffs), q_prec)
    mu = ColemanMeasure(W, q, (), label)

    audit: List[Dict[str, Any]] = []
    R = RamifiedRing.over(W)
    Gk, GFk = G, GF
    for k in range(checks):
        if Gk.trunc < 2 or mu.iterate(k).trunc < 2:
            break
        points = [R.from_base(Gk[0])] + [R.evaluate(Gk.coeffs, R.zeta_p(j) - R.from_base(W.one()), Gk.precision)
                                         for j in range(1, W.p)]
        by_trace = _trace(points)
        literal = R.from_base(GFk[0] * W.p ** (k + 1))
        ok = (by_trace - literal).is_zero()
        audit.append({"check": "psi", "k": k, "precision": (by_trace - literal).precision, "ok": ok})
        if not ok:
            raise TraceNotZero(f"psi by trace and psi by Frobenius disagree on D^{k} g")
        total = _trace(mu.values_at_roots(k))
        ok = total.is_zero()
        audit.append({"check": "trace", "k": k, "precision": total.precision, "ok": ok})
        if not ok:
            raise TraceNotZero(f"trace of D^{k} q over mu_p does not vanish")
        Gk, GFk = x_derivative(Gk), x_derivative(GFk)
    logger.bind(event="coleman_measure", p=W.p, parts=len(parts)).debug(
        f"transform to (p^{q_prec}, X^{q.trunc}), {len(audit)} audits")
    return ColemanMeasure(W, q, tuple(audit), label, mu._powers)


# moment series -------------------------------------------------------

@dataclass(frozen=True)
class MeasureSeries:
    """
    - series: H with H(t^s - 1) = int omega^(j - s)(x) x^s dmu
    - moments: M_s at the construction and held-out nodes
    """
    series: PowerSeries
    generator: Generator
    omega_power: int
    moments: Tuple[ExtScalar, ...]
    guaranteed: Tuple[int, int]
    interpolation: Interpolation
    audit: List[Dict[str, Any]] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        m, n = self.guaranteed
        return {
            "series": self.series.to_json(),
            "omega_power": self.omega_power,
            "guaranteed_precision": {"m": m, "n": n},
            "interpolation": self.interpolation.to_json(),
            "audit": self.audit,
        }


def omega_power(theta: Optional[DirichletCharacter], omega: DirichletCharacter) -> int:
    """j with theta's p-component equal to omega^j (0 when p does not divide the modulus)."""
    p = omega.modulus
    if theta is None or theta.modulus % p:
        return 0
    comp = theta.component(p)
    for j in range(p - 1):
        if all(omega.power(j).exponent(a) == comp.exponent(a) for a in range(1, p)):
            return j
    raise ValueError(f"{theta!r} has no omega-power p-component")


def measure_to_series(mu: ColemanMeasure, theta: Optional[DirichletCharacter], g: Generator, n_out: int,
                      precision: int, threads: Optional[int] = None) -> MeasureSeries:
    """Interpolate the twisted moments at t^s - 1 into a series certified to (p^precision, X^n_out)."""
    p = mu.p
    K = precision + n_out - 1
    omega = teichmuller_character(mu.ring)
    j = omega_power(theta, omega)
    work = working_precision(p, precision, K + GUARD_NODES)
    gen = g.at_precision(work)
    ks = list(range(K + GUARD_NODES))

    moments = map_ordered(lambda s: mu.twisted_moment(s, j, omega), ks, threads)
    interp = interpolate(mu.ring, [gen.node(s) for s in ks[:K]], moments[:K], precision, trunc=n_out)
    m_out, n_got = interp.guaranteed
    if m_out < precision:
        raise PrecisionExhausted(f"moment interpolation certified p^{m_out}, asked for p^{precision}")
    series = interp.series()

    audit: List[Dict[str, Any]] = []
    for s in ks[K:]:
        got = series.eval_at_ts(s, gen)
        prec = min(got.precision, moments[s].precision)
        ok = got.agrees(moments[s], prec)
        audit.append({"check": "held_out", "s": s, "precision": prec, "ok": ok})
        if not ok:
            raise PrecisionExhausted(f"held-out moment at t^{s} - 1 disagrees at p^{prec}")
    for s in ks:
        parts = mu.class_moments(s)
        direct = parts[0]
        for part in parts[1:]:
            direct = direct + part
        stir = mu.mahler_moment(s)
        prec = min(direct.precision, stir.precision)
        audit.append({"check": "stirling", "s": s, "precision": prec, "ok": direct.agrees(stir, prec)})
    if j == 0:
        prec = min(moments[0].precision, mu.mass().precision)
        audit.append({"check": "mass", "precision": prec, "ok": moments[0].agrees(mu.mass(), prec)})
    logger.bind(event="measure_to_series", p=p, omega_power=j).info(
        f"H certified to (p^{m_out}, X^{n_got}) from {K} moments")
    return MeasureSeries(series, gen, j, tuple(moments), (m_out, n_got), interp, audit)
