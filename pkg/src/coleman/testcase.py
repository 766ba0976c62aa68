"""
The cyclotomic test case: the theta-fold of the zeta system 1 - zeta_N (1 + T) is
sent by the Coleman pipeline to -tau(theta^-1) xi_testcase, and its intermediate
modules are those of alpha = xi with sigma acting through theta(p).
"""
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger

from src.characters.dirichlet import DirichletCharacter, teichmuller_character
from src.characters.errors import HypothesisViolation
from src.characters.lvalues import lp_value
from src.characters.search import check_testcase, field_ring
from src.lfun.kubota_leopoldt import LpSeries, kubota_leopoldt
from src.series.generator import Generator

from .intermediate import SigmaAction, four_term_sequence, intermediate_modules
from .measure import ColemanMeasure, MeasurePlan, MeasureSeries, coleman_measure, measure_to_series
from .norm_system import coleman_series, cyclotomic_family

CONVENTION = {
    "fold": "sum_a theta^-1(a) * (1 - zeta_N^a (1 + T)), a in (Z/N)^x",
    "moments": "H(t^s - 1) = int_{Z_p^x} omega(x)^-s x^s dmu",
    "normalization": "Col(z) = -H = tau(theta^-1) * xi_testcase",
}


def _require_testcase(p: int, N: int, theta: DirichletCharacter) -> None:
    report = check_testcase(p, N, theta)
    if not report["ok"]:
        raise HypothesisViolation("; ".join(report["reasons"]))


def coleman_image(p: int, N: int, theta: DirichletCharacter, m: int, n: int, g: Generator,
                  threads: Optional[int] = None) -> Tuple[ColemanMeasure, MeasureSeries]:
    """The measure of the theta-fold of the zeta system and its moment series H; Col(z) = -H."""
    _require_testcase(p, N, theta)
    plan = MeasurePlan.of(p, m, n)
    W = field_ring(p, theta, plan.ring_precision, extra=[N])
    family = [(w, coleman_series(system)) for w, system in cyclotomic_family(W, N, theta)]
    mu = coleman_measure(family, plan.trunc, label=f"theta-fold of zeta_{N}")
    return mu, measure_to_series(mu, theta, g, n, m, threads)


def capstone(p: int, N: int, theta: DirichletCharacter, m: int, n: int, g: Generator,
             threads: Optional[int] = None) -> Dict[str, Any]:
    """Col(z) against tau(theta^-1) xi_testcase, as series and moment by moment."""
    mu, H = coleman_image(p, N, theta, m, n, g, threads)
    W = field_ring(p, theta, MeasurePlan.of(p, m, n).ring_precision, extra=[N])
    col_z = -H.series

    xi = kubota_leopoldt(theta, "testcase", m, n, g, ring=W, threads=threads)
    tau = theta.inverse().gauss_sum(W)
    expected = xi.series.lift_to(W).scale_by(tau)
    prec = min(col_z.precision, expected.precision, m)
    series_ok = col_z.agrees(expected, prec, n)

    omega = teichmuller_character(W)
    chi = theta.primitive()
    moments: List[Dict[str, Any]] = []
    for k in range(1, len(H.moments)):
        want = -(tau * lp_value(chi, k, W, omega))
        got = H.moments[k]
        kp = min(got.precision, want.precision)
        moments.append({"k": k, "precision": kp, "ok": got.agrees(want, kp)})

    checks = {
        "series": series_ok,
        "moments": all(entry["ok"] for entry in moments),
        "measure_audit": all(entry["ok"] for entry in mu.checks),
        "moment_audit": all(entry["ok"] for entry in H.audit),
    }
    ok = all(checks.values())
    logger.bind(event="capstone", p=p, N=N).info(f"ok={ok} at (p^{prec}, X^{n})")
    return {
        "ok": ok,
        "checks": checks,
        "precision": {"m": prec, "n": n},
        "convention": dict(CONVENTION),
        "col_z": col_z.to_json(),
        "xi_testcase": xi.series.to_json(),
        "moments": moments,
        "audit": list(mu.checks) + list(H.audit),
    }


def testcase_sequences(p: int, N: int, theta: DirichletCharacter, xi: LpSeries) -> Dict[str, Any]:
    """The four-term sequence of xi and the intermediate modules for alpha = xi with sigma = theta(p)."""
    _require_testcase(p, N, theta)
    series = xi.series
    O = series.ring
    action = SigmaAction.scalar(O, theta.value(p, O), "theta(p)")
    modules = intermediate_modules(series, action)
    parts = {
        "four_term": four_term_sequence(series),
        "sequence": modules.sequence().to_json(),
        "z_quo": modules.z_quo_check().to_json(),
    }
    if modules.pole:
        parts["split"] = modules.split_check().to_json()
    else:
        parts["simple"] = modules.simple_check().to_json()
    ok = all(part["ok"] for part in parts.values())
    logger.bind(event="testcase_sequences", p=p, N=N).info(f"ok={ok} lambda={modules.weierstrass.lam}")
    return {"ok": ok, "modules": modules.to_json(), **parts}
