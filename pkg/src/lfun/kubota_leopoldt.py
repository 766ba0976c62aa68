"""
The Kubota-Leopoldt series xi_theta, built by Newton interpolation from exact L-values.

Conventions:
- main: xi(t^s - 1) = L_p(omega^2 theta^-1, s - 1); node for L_p(., 1 - k) is t^(2-k) - 1
- testcase: xi(t^(1-s) - 1) = L_p(theta, s); node for L_p(., 1 - k) is t^k - 1

Certifying (m, n) needs K = m + n - 1 construction nodes; two more nodes are held
out and audited against lp_value before the series is returned.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger

from src.characters.dirichlet import DirichletCharacter, teichmuller_character
from src.characters.errors import HypothesisViolation
from src.characters.lvalues import lp_value
from src.jobs.pool import map_ordered
from src.padic.errors import PrecisionExhausted
from src.padic.ring import ExtScalar, UnramifiedRing
from src.series.generator import Generator
from src.series.newton import Interpolation, interpolate, working_precision
from src.series.power_series import PowerSeries

CONVENTIONS = ("main", "testcase")
GUARD_NODES = 2


@dataclass(frozen=True)
class LpSeries:
    """
    - series: xi known to (precision, trunc) = guaranteed
    - generator: t, at the working precision of the nodes
    - character: the character whose L-values are interpolated
    - audit: one entry per held-out node
    """
    theta: DirichletCharacter
    convention: str
    series: PowerSeries
    generator: Generator
    character: DirichletCharacter
    omega: DirichletCharacter
    guaranteed: Tuple[int, int]
    interpolation: Interpolation
    audit: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ring(self) -> UnramifiedRing:
        return self.series.ring

    @property
    def p(self) -> int:
        return self.series.p

    def node_exponent(self, k: int) -> int:
        """Exponent e with xi(t^e - 1) = L_p(character, 1 - k)."""
        return node_exponent(self.convention, k)

    def evaluate(self, s: int) -> ExtScalar:
        """xi(t^s - 1)."""
        return self.series.eval_at_ts(s, self.generator)

    def value_at(self, k: int) -> ExtScalar:
        """xi at the node carrying L_p(character, 1 - k)."""
        return self.evaluate(self.node_exponent(k))

    def to_json(self) -> Dict[str, Any]:
        m, n = self.guaranteed
        return {
            "convention": self.convention,
            "theta": self.theta.to_json(),
            "generator": self.generator.to_json(),
            "series": self.series.to_json(),
            "guaranteed_precision": {"m": m, "n": n},
            "interpolation": self.interpolation.to_json(),
            "audit": self.audit,
        }


def node_exponent(convention: str, k: int) -> int:
    if convention == "main":
        return 2 - k
    if convention == "testcase":
        return k
    raise ValueError(f"unknown convention {convention!r}")


def interpolated_character(theta: DirichletCharacter, convention: str,
                           omega: DirichletCharacter) -> DirichletCharacter:
    """omega^2 theta^-1 for the main convention, theta itself for the test case."""
    if convention == "main":
        return (omega.power(2) * theta.inverse()).primitive()
    if convention == "testcase":
        return theta.primitive()
    raise ValueError(f"unknown convention {convention!r}")


def _check_convention(theta: DirichletCharacter, chi: DirichletCharacter, convention: str) -> None:
    if not theta.is_even():
        raise HypothesisViolation(f"{convention} convention needs an even character, got {theta!r}")
    if chi.is_trivial():
        raise HypothesisViolation(f"the {convention} L-function of {theta!r} has a pole")


def kubota_leopoldt(theta: DirichletCharacter, convention: str, m: int, n: int, g: Generator,
                    ring: Optional[UnramifiedRing] = None, threads: Optional[int] = None) -> LpSeries:
    """
    xi for theta at guaranteed precision (p^m, X^n).
    ring, when given, fixes the coefficient field (its precision is raised to the working precision).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    p = g.p
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if n >= p:
        raise ValueError(f"n={n} must stay below p={p}")
    K = m + n - 1
    work = working_precision(p, m, K + GUARD_NODES)
    if ring is None:
        ring = UnramifiedRing.for_orders(p, [theta.order, p - 1], work)
    else:
        ring = ring.with_precision(work)
    omega = teichmuller_character(ring)
    chi = interpolated_character(theta, convention, omega)
    _check_convention(theta, chi, convention)
    gen = g.at_precision(work)

    ks = list(range(1, K + GUARD_NODES + 1))
    values = map_ordered(lambda k: lp_value(chi, k, ring, omega), ks, threads)
    nodes = [gen.node(node_exponent(convention, k)) for k in ks]
    interp = interpolate(ring, nodes[:K], values[:K], m, trunc=n)
    m_out, n_out = interp.guaranteed
    if m_out < m:
        raise PrecisionExhausted(f"interpolation certified p^{m_out}, asked for p^{m}")
    series = interp.series()

    audit: List[Dict[str, Any]] = []
    for k, value in zip(ks[K:], values[K:]):
        e = node_exponent(convention, k)
        got = series.eval_at_ts(e, gen)
        prec = min(got.precision, value.precision)
        ok = got.agrees(value, prec)
        audit.append({"k": k, "exponent": e, "precision": prec, "ok": ok})
        if not ok:
            raise PrecisionExhausted(f"held-out node t^{e} - 1 disagrees with L_p at p^{prec}")
    logger.bind(event="kubota_leopoldt", p=p, convention=convention).info(
        f"xi certified to (p^{m_out}, X^{n_out}) from {K} nodes, {len(audit)} held out")
    return LpSeries(theta, convention, series, gen, chi, omega, (m_out, n_out), interp, audit)


def audit_window(xi: LpSeries, ks: List[int], threads: Optional[int] = None) -> List[Dict[str, Any]]:
    """Interpolation contract at L_p(character, 1 - k) for every k in ks."""
    ring = xi.interpolation.ring
    values = map_ordered(lambda k: lp_value(xi.character, k, ring, xi.omega), ks, threads)
    out = []
    for k, value in zip(ks, values):
        got = xi.value_at(k)
        prec = min(got.precision, value.precision)
        out.append({"k": k, "exponent": xi.node_exponent(k), "precision": prec, "ok": got.agrees(value, prec)})
    return out


def mirror_series(f: PowerSeries, g: Generator) -> PowerSeries:
    """
    f(t^2 (1 + X)^-1 - 1) truncated at X^trunc. The substitution is an involution
    and maps t^s - 1 to t^(2-s) - 1.
    Coefficient j only holds modulo p^(trunc - j): the unknown tail of f enters
    through (t^2 - 1)^i with i >= trunc.
    """
    n = f.trunc
    one = PowerSeries.one(f.ring, n)
    t2 = g.power(2)
    inner = ((one + PowerSeries.variable(f.ring, n)).inverse() - one).scale_by(t2) + (t2 - 1)
    acc = PowerSeries.from_coefficients(f.ring, [f[n - 1]], f.precision, n)
    for i in range(n - 2, -1, -1):
        acc = acc * inner + f[i]
    return acc


def mirror_check(theta: DirichletCharacter, m: int, n: int, g: Generator,
                 window: Tuple[int, ...] = (-1, 0, 1, 2, 3)) -> Dict[str, Any]:
    """
    xi_main(theta)(X) against xi_testcase(omega^2 theta^-1)(t^2 (1 + X)^-1 - 1).
    - coefficients: the substituted test-case series, coefficient by coefficient
    - checked: both sides at t^s - 1, and for s <= 1 the defining value L_p(omega^2 theta^-1, s - 1)
    """
    main = kubota_leopoldt(theta, "main", m, n, g)
    mirrored = main.character
    test = kubota_leopoldt(mirrored, "testcase", m, n, g, ring=main.ring)

    substituted = mirror_series(test.series, test.generator)
    trunc = min(main.series.trunc, substituted.trunc)
    coefficients = []
    for j in range(trunc):
        prec = min(main.series.precision, substituted.precision, trunc - j)
        coefficients.append({"j": j, "precision": prec, "ok": main.series[j].agrees(substituted[j], prec)})

    ring = main.interpolation.ring
    checked = []
    for s in window:
        a, b = main.evaluate(s), test.evaluate(2 - s)
        prec = min(a.precision, b.precision)
        agree = a.agrees(b, prec)
        entry: Dict[str, Any] = {"s": s, "precision": prec}
        if 2 - s >= 1:
            value = lp_value(mirrored, 2 - s, ring, main.omega)
            anchored = min(a.precision, value.precision)
            agree = agree and a.agrees(value, anchored)
            entry["lp_precision"] = anchored
        entry["ok"] = agree
        checked.append(entry)

    ok = all(entry["ok"] for entry in coefficients) and all(entry["ok"] for entry in checked)
    logger.bind(event="mirror_check", p=g.p).info(f"ok={ok} over {trunc} coefficients and {len(checked)} points")
    return {
        "ok": ok,
        "substitution": "X -> t^2 (1 + X)^-1 - 1",
        "coefficients": coefficients,
        "checked": checked,
    }
