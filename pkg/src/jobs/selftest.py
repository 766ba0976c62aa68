"""
End-to-end self-test: every identity that is checkable at finite precision, run on
fixed fixtures. Quick checks run in about a second; the full suite searches its fixture
window once and then runs for tens of minutes.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional
import random

from loguru import logger
from sympy import primerange

from src.characters.dirichlet import kronecker_character
from src.characters.search import EisensteinTriple, find_eisenstein_pairs
from src.coleman.flat import col_vs_flat_check
from src.coleman.intermediate import SigmaAction, intermediate_modules
from src.coleman.measure import MeasurePlan
from src.coleman.norm_system import NormSystem
from src.coleman.testcase import capstone, testcase_sequences
from src.lfun.invariants import invariants
from src.lfun.kubota_leopoldt import audit_window, kubota_leopoldt
from src.modsym.eisenstein import eisenstein_quotient, theta_space
from src.modsym.hecke import hecke
from src.modsym.manin import cusp_count, genus
from src.modsym.space import build_space
from src.padic.ring import UnramifiedRing
from src.series.calculus import derivative_identity_holds, diagonal_identity_holds
from src.series.generator import Generator
from src.series.power_series import PowerSeries
from src.settings import get_settings

from .report import Report

QUICK = "quick"
FULL = "full"

CAPSTONE_FIXTURE = (5, 24)
FIXTURE_WINDOW = {"p_max": 50, "N_max": 30}


@dataclass
class SelfTestRun:
    """
    State shared by the checks of one run.
    - max_level: Eisenstein fixtures above level N*p are reported as skipped
    - fixtures: irregular triples of the search window, searched at most once
    """
    threads: Optional[int] = None
    max_level: int = 100
    fixtures: Optional[List[EisensteinTriple]] = field(default=None, repr=False)

    def eisenstein_fixtures(self) -> List[EisensteinTriple]:
        if self.fixtures is None:
            primes = list(primerange(5, FIXTURE_WINDOW["p_max"] + 1))
            self.fixtures = find_eisenstein_pairs(primes, range(1, FIXTURE_WINDOW["N_max"] + 1), precision=3)
            logger.bind(event="selftest_fixtures").info(f"{len(self.fixtures)} irregular triples")
        return self.fixtures


@dataclass(frozen=True)
class SelfCheck:
    name: str
    tag: str
    run: Callable[[SelfTestRun], Dict[str, Any]]


def _corpus(count: int = 100) -> List[PowerSeries]:
    ring = UnramifiedRing.build(5, 1, 6)
    rng = random.Random(2024)
    return [PowerSeries.from_coefficients(ring, [rng.randrange(5 ** 6) for _ in range(6)]) for _ in range(count)]


def check_diagonalization(ctx: SelfTestRun) -> Dict[str, Any]:
    corpus = _corpus()
    return {"ok": all(diagonal_identity_holds(f) for f in corpus), "cases": len(corpus), "precision": 6}


def check_derivative_identity(ctx: SelfTestRun) -> Dict[str, Any]:
    corpus = _corpus()
    return {"ok": all(derivative_identity_holds(f) for f in corpus), "cases": len(corpus), "precision": 6}


def check_manin_small(ctx: SelfTestRun) -> Dict[str, Any]:
    R = UnramifiedRing.build(101, 1, 2)
    bad = [M for M in range(3, 21) if build_space(M, R, sign=1).cuspidal_rank != genus(M)]
    plus11 = build_space(11, R, sign=1)
    t2 = hecke(plus11, "T2").on_cuspidal()
    return {"ok": not bad and t2 == [[R._from_int(-2)]], "mismatched_levels": bad}


def check_manin_structure(ctx: SelfTestRun) -> Dict[str, Any]:
    R = UnramifiedRing.build(101, 1, 2)
    bad: List[int] = []
    for M in range(3, 41):
        full = build_space(M, R)
        if full.cuspidal_rank != 2 * genus(M) or full.cusp_basis.rank != cusp_count(M):
            bad.append(M)
        elif build_space(M, R, sign=1).cuspidal_rank != genus(M):
            bad.append(M)
    space = build_space(13, R)
    ops = [hecke(space, label) for label in ("T2", "T3", "U13", "<2>")]
    rng = random.Random(7)
    samples = []
    for _ in range(5):
        x = [R._from_int(rng.randrange(101 ** 2)) for _ in range(space.rank)]
        samples.append(ops[1].apply(ops[0].apply(x)) == ops[0].apply(ops[1].apply(x)))
    commutes = all(op.checks["commutes"] for op in ops) and all(samples)
    return {"ok": not bad and commutes, "mismatched_levels": bad, "commutes": commutes}


def check_interpolation(ctx: SelfTestRun) -> Dict[str, Any]:
    entries = []
    for hit in ctx.eisenstein_fixtures():
        n = min(4, hit.p - 1)
        xi = kubota_leopoldt(hit.theta, "main", 3, n, Generator.build(hit.p, 12), threads=ctx.threads)
        beyond = xi.guaranteed[0] + xi.guaranteed[1] + 2
        held_out = audit_window(xi, [beyond, beyond + 1], ctx.threads)
        mu = invariants(xi)
        entries.append({
            "p": hit.p,
            "N": hit.N,
            "ok": all(e["ok"] for e in xi.audit + held_out) and mu["certified"],
            "mu_certified": mu["certified"],
            "lambda": mu["lambda"],
        })
    return {"ok": bool(entries) and all(e["ok"] for e in entries), "fixtures": entries, "precision": 3}


def check_capstone(ctx: SelfTestRun) -> Dict[str, Any]:
    p, N = CAPSTONE_FIXTURE
    report = capstone(p, N, kronecker_character(N), 3, 4, Generator.build(p, 16), ctx.threads)
    return {"ok": report["ok"], "checks": report["checks"], "precision": report["precision"]["m"]}


def check_col_vs_flat(ctx: SelfTestRun) -> Dict[str, Any]:
    plan = MeasurePlan.of(5, 2, 1)
    W = UnramifiedRing.for_orders(5, [3, 4], plan.ring_precision)
    g = Generator.build(5, 10)
    zeta = NormSystem.cyclotomic(W, 3, 1, r_max=1)
    plain = col_vs_flat_check([(W.one(), zeta)], g, 2)
    twisted = col_vs_flat_check([(W.one(), zeta.product(NormSystem.constant(W, 4, 1, r_max=1)))], g, 2)
    return {"ok": plain["ok"] and twisted["ok"], "precision": plain["precision"]}


def check_eisenstein(ctx: SelfTestRun) -> Dict[str, Any]:
    entries = []
    skipped = []
    for hit in ctx.eisenstein_fixtures():
        level = hit.N * hit.p
        if level > ctx.max_level:
            skipped.append({"p": hit.p, "N": hit.N, "level": level})
            continue
        report = eisenstein_quotient(theta_space(hit.p, hit.N, hit.theta, 3), hit.p, hit.theta, 3, ctx.threads)
        entries.append({"p": hit.p, "N": hit.N, "level": level, "ok": report["ok"],
                        "order_exponent": report["order_exponent"],
                        "expected_exponent": report["expected_exponent"]})
    if skipped:
        logger.bind(event="selftest_skipped", max_level=ctx.max_level).warning(
            f"{len(skipped)} Eisenstein fixtures above level {ctx.max_level} not computed")
    return {
        "ok": bool(entries) and all(e["ok"] for e in entries),
        "fixtures": entries,
        "skipped": skipped,
        "max_level": ctx.max_level,
    }


def check_intermediate(ctx: SelfTestRun) -> Dict[str, Any]:
    O = UnramifiedRing.build(5, 1, 4)
    alpha = PowerSeries.from_coefficients(O, [5, 1], trunc=5)
    split = intermediate_modules(alpha, SigmaAction.trivial(O))
    simple = intermediate_modules(alpha, SigmaAction.scalar(O, O.from_int(6)))
    parts = {
        "split_sequence": split.sequence().ok,
        "split": split.split_check().ok,
        "split_z_quo": split.z_quo_check().ok,
        "simple_sequence": simple.sequence().ok,
        "simple": simple.simple_check().ok,
        "simple_z_quo": simple.z_quo_check().ok,
    }
    theta = kronecker_character(24)
    xi = kubota_leopoldt(theta, "testcase", 3, 3, Generator.build(5, 12), threads=ctx.threads)
    parts["testcase"] = testcase_sequences(5, 24, theta, xi)["ok"]
    return {"ok": all(parts.values()), "parts": parts, "precision": 4}


SUITE = (
    SelfCheck("diagonalization_identity", QUICK, check_diagonalization),
    SelfCheck("derivative_identity", QUICK, check_derivative_identity),
    SelfCheck("manin_small_levels", QUICK, check_manin_small),
    SelfCheck("intermediate_modules", QUICK, check_intermediate),
    SelfCheck("col_vs_flat", FULL, check_col_vs_flat),
    SelfCheck("manin_structure", FULL, check_manin_structure),
    SelfCheck("kubota_leopoldt_interpolation", FULL, check_interpolation),
    SelfCheck("capstone", FULL, check_capstone),
    SelfCheck("eisenstein_order", FULL, check_eisenstein),
)


def run_selftest(report: Report, quick: bool = False, threads: Optional[int] = None,
                 max_level: Optional[int] = None) -> Report:
    ctx = SelfTestRun(threads, max_level or get_settings().eisenstein_max_level)
    for entry in SUITE:
        if quick and entry.tag != QUICK:
            continue
        result = entry.run(ctx)
        report.results[entry.name] = result
        report.check(entry.name, result["ok"], **({"precision": result["precision"]} if "precision" in result else {}))
        logger.bind(event="selftest", check=entry.name).info(f"ok={result['ok']}")
    return report
