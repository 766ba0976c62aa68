"""
Dispatch of a validated JobConfig to the computation packages. Every command fills
one Report; the report never holds timestamps so identical runs are byte-identical.
"""
from typing import Any, Dict, List

from loguru import logger
from sympy import primerange

from src.characters.search import field_ring, find_eisenstein_pairs
from src.coleman.flat import col_vs_flat_check
from src.coleman.measure import MeasurePlan
from src.coleman.norm_system import cyclotomic_family
from src.coleman.testcase import capstone, coleman_image, testcase_sequences
from src.lfun.derivatives import derivative_ratio
from src.lfun.invariants import invariants
from src.lfun.kubota_leopoldt import kubota_leopoldt, mirror_check
from src.modsym.eisenstein import eisenstein_quotient, theta_space
from src.modsym.hecke import hecke
from src.modsym.manin import genus
from src.modsym.space import build_space
from src.modsym.symbols import varpi_formal
from src.padic.ring import UnramifiedRing
from src.series.generator import Generator

from .config import JobConfig, msym_level, parse_eisenstein, parse_pair, parse_theta, validate
from .report import Report
from .selftest import run_selftest


def _generator(config: JobConfig) -> Generator:
    return Generator.build(config.p, 2 * (config.m + config.n) + 4, config.generator)


def _derivative_steps(config: JobConfig) -> List[Any]:
    """(s, h) pairs whose finite differences stay on interpolation nodes."""
    if config.convention == "main":
        return [(0, 0), (1 - config.p, 1)]
    return [(1, 0), (1, 1)]


def run_lfun(config: JobConfig, report: Report) -> Report:
    theta = parse_theta(config.theta, config.p)
    g = _generator(config)
    xi = kubota_leopoldt(theta, config.convention, config.m, config.n, g, threads=config.threads)
    report.results["lfun"] = xi.to_json()
    report.check("held_out_nodes", all(entry["ok"] for entry in xi.audit), precision=xi.guaranteed[0])

    inv = invariants(xi)
    report.results["invariants"] = inv
    report.check("mu_zero", inv["certified"], precision=inv["precision"])

    ratios = [derivative_ratio(xi, s, h) for s, h in _derivative_steps(config)]
    report.results["derivative"] = ratios
    for entry in ratios:
        report.check(f"finite_difference_s{entry['s']}_h{entry['h']}", entry["ok"], precision=entry["precision"])

    if config.convention == "main":
        mirror = mirror_check(theta, config.m, config.n, g)
        report.results["mirror"] = mirror
        report.check("mirror_substitution", mirror["ok"])
    return report


def run_coleman(config: JobConfig, report: Report) -> Report:
    p, N, m, n = config.p, config.N, config.m, config.n
    theta = parse_theta(config.theta, p)
    g = _generator(config)
    if config.compare_lfun:
        result = capstone(p, N, theta, m, n, g, config.threads)
        report.results["capstone"] = {"match": result["ok"], **result}
        for name, ok in result["checks"].items():
            report.check(f"capstone_{name}", ok, precision=result["precision"]["m"])
        xi = kubota_leopoldt(theta, "testcase", m, n, g, threads=config.threads)
        sequences = testcase_sequences(p, N, theta, xi)
        report.results["sequences"] = sequences
        report.check("intermediate_sequences", sequences["ok"])
    else:
        mu, H = coleman_image(p, N, theta, m, n, g, config.threads)
        report.results["measure"] = mu.to_json()
        report.results["moment_series"] = H.to_json()
        report.results["output_series"] = (-H.series).to_json()
        report.check("measure_audit", all(entry["ok"] for entry in mu.checks))
        report.check("moment_audit", all(entry["ok"] for entry in H.audit), precision=H.guaranteed[0])

    W = field_ring(p, theta, MeasurePlan.of(p, m, 1).ring_precision, extra=[N])
    flat = col_vs_flat_check(cyclotomic_family(W, N, theta), g, m, theta)
    report.results["col_vs_flat"] = flat
    report.check("col_vs_flat", flat["ok"], precision=flat["precision"])
    return report


def _formal_json(formal: Dict[Any, int]) -> List[List[int]]:
    return [[u, v, k] for (u, v), k in formal.items()]


def run_msym(config: JobConfig, report: Report) -> Report:
    level = msym_level(config)
    eisenstein = None
    if config.eisenstein:
        p, spec = parse_eisenstein(config.eisenstein)
        theta = parse_theta(spec, p)
        space = theta_space(p, config.N, theta, config.m)
        eisenstein = (p, theta)
    else:
        space = build_space(level, UnramifiedRing.build(config.p, 1, config.m), sign=config.sign)
        g = genus(level)
        report.check("cuspidal_rank", space.cuspidal_rank == (g if config.sign == 1 else 2 * g))
    report.results["space"] = space.to_json()

    operators = []
    for label in config.hecke:
        op = hecke(space, label)
        operators.append(op.to_json(with_matrix=config.matrices))
        for name, ok in op.checks.items():
            report.check(f"{op.label}_{name}", ok)
    report.results["operators"] = operators

    if eisenstein is not None:
        p, theta = eisenstein
        result = eisenstein_quotient(space, p, theta, config.m, config.threads)
        report.results["eisenstein"] = result
        for name, ok in result["checks"].items():
            report.check(f"eisenstein_{name}", ok, precision=result["precision"])

    formal = []
    for spec in config.varpi:
        u, v = parse_pair(spec)
        formal.append({"symbol": [u, v], "formal": _formal_json(varpi_formal(space, {(u, v): 1}))})
    if formal:
        report.results["varpi"] = formal
    return report


def run_search(config: JobConfig, report: Report) -> Report:
    hits = find_eisenstein_pairs(list(primerange(5, config.p_max + 1)), range(1, config.N_max + 1),
                                 precision=config.m, limit=config.limit)
    report.results["hits"] = [hit.to_json() for hit in hits]
    report.check("found_irregular_pair", bool(hits))
    return report


RUNNERS = {
    "lfun": run_lfun,
    "coleman": run_coleman,
    "msym": run_msym,
    "search": run_search,
}


def run(config: JobConfig) -> Report:
    validate(config)
    report = Report(config.command, config.resolved())
    logger.bind(event="job_start", command=config.command).info(f"p={config.p} N={config.N}")
    if config.command == "selftest":
        run_selftest(report, quick=config.quick, threads=config.threads, max_level=config.max_level)
    else:
        RUNNERS[config.command](config, report)
    logger.bind(event="job_done", command=config.command).info(f"ok={report.ok}")
    return report
