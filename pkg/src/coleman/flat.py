"""
The ground-level map u -> (1 - Fr/p) log u on W[1/p]^x, and its agreement with the
constant term of the moment series under corestriction.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple

from loguru import logger

from src.characters.dirichlet import DirichletCharacter
from src.padic.analysis import log_unit
from src.padic.errors import ConvergenceDomain
from src.padic.ring import ExtScalar
from src.series.generator import Generator

from .measure import MeasurePlan, coleman_measure, measure_to_series
from .norm_system import NormSystem, coleman_series


def coleman_flat(u: ExtScalar) -> ExtScalar:
    """(1 - Fr/p) log of the unit part of u; p itself maps to 0."""
    v = u.valuation()
    if v >= u.precision:
        raise ConvergenceDomain("the flat map is not defined at 0")
    unit = u.divide_by_p(v)
    log_u = log_unit(unit)
    return log_u - log_u.frobenius().divide_by_p()


def corestriction(system: NormSystem) -> ExtScalar:
    """N_{1 -> 0}(u_1)."""
    W = system.ring
    return ExtScalar(W, system.layer(1).norm_to_ground(system.u(1)), system.precision)


def _flat_sides(system: NormSystem, g: Generator, precision: int) -> Tuple[ExtScalar, ExtScalar]:
    plan = MeasurePlan.of(system.p, precision, 1)
    mu = coleman_measure(coleman_series(system), plan.trunc)
    h0 = measure_to_series(mu, None, g, 1, precision).series[0]
    lhs = h0 - h0.frobenius(-1)
    rhs = coleman_flat(corestriction(system))
    return lhs, rhs


def col_vs_flat_check(systems: Sequence[Tuple[ExtScalar, NormSystem]], g: Generator, precision: int,
                      theta: Optional[DirichletCharacter] = None) -> Dict[str, Any]:
    """
    (1 - Fr^-1) H(0) against the flat map of the corestriction, summed with the given weights.
    Systems must be built at MeasurePlan.of(p, precision, 1).ring_precision.
    """
    lhs = rhs = None
    parts: List[Dict[str, Any]] = []
    for w, system in systems:
        a, b = _flat_sides(system, g, precision)
        prec = min(a.precision, b.precision)
        parts.append({"params": system.params, "precision": prec, "ok": a.agrees(b, prec)})
        lhs = a * w if lhs is None else lhs + a * w
        rhs = b * w if rhs is None else rhs + b * w
    prec = min(lhs.precision, rhs.precision, precision)
    ok = lhs.agrees(rhs, prec)
    logger.bind(event="col_vs_flat", systems=len(parts)).info(f"ok={ok} at p^{prec}")
    return {
        "ok": ok,
        "precision": prec,
        "theta": theta.to_json() if theta is not None else None,
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
        "parts": parts,
    }
