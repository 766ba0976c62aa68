import sys
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

import click
import orjson
from pydantic import ValidationError

from src.audit.logger import configure_logging
from src.audit.store import CacheStore
from src.characters import CharacterError
from src.characters import use_store as use_bernoulli_store
from src.coleman import ColemanError
from src.jobs.config import ConfigError, JobConfig
from src.jobs.report import build_markdown_summary
from src.jobs.run import run
from src.modsym import ModsymError
from src.modsym import use_store as use_heilbronn_store
from src.padic.errors import ArithmeticFault
from src.settings import get_settings, load_env

ERROR_TAGS: Tuple[Tuple[type, str], ...] = (
    (ConfigError, "Config"),
    (ValidationError, "Config"),
    (ArithmeticFault, "Precision"),
    (CharacterError, "Character"),
    (ColemanError, "Coleman"),
    (ModsymError, "Modular Symbols"),
    (ValueError, "Input"),
)


def _parse_prec(value: Optional[str]) -> Dict[str, int]:
    if not value:
        return {}
    m, sep, n = value.partition(",")
    try:
        return {"m": int(m), "n": int(n)} if sep else {"m": int(m)}
    except ValueError:
        raise click.BadParameter(f"{value!r} is not 'm,n'") from None


def _execute(ctx: click.Context, command: str, **options: Any) -> None:
    """Build the config, run it, write the report and exit 0 iff every assertion passed."""
    common = ctx.obj
    fields = {k: v for k, v in {**common["fields"], **options}.items() if v is not None}
    start_time = datetime.now()
    try:
        config = JobConfig(command=command, **fields)
        store = CacheStore(config.cache_dir)
        use_bernoulli_store(store)
        use_heilbronn_store(store)
        report = run(config)
    except Exception as exc:
        for family, tag in ERROR_TAGS:
            if isinstance(exc, family):
                click.echo(f"[{tag}] {exc}", err=True)
                sys.exit(1)
        click.echo(f"[Unexpected Error] {exc}", err=True)
        sys.exit(1)
    end_time = datetime.now()

    if command == "search":
        for hit in report.results["hits"]:
            click.echo(orjson.dumps(hit, option=orjson.OPT_SORT_KEYS).decode())
    else:
        click.echo(report.dumps().decode())
    if config.output:
        report.write(config.output)
    click.echo(build_markdown_summary(report, start_time, end_time, config.output), err=True)
    sys.exit(0 if report.ok else 1)


@click.group()
@click.option("--p", "p", type=int, help="The prime p.")
@click.option("--N", "N", type=int, help="Tame level N, prime to p.")
@click.option("--theta", help="kronecker:D, chi:f:a,b,... or omega:i, joined with '*'.")
@click.option("--prec", help="Target precision 'm,n' for p^m and X^n.")
@click.option("--generator", type=click.Choice(["simple", "normalized"]), help="Topological generator t.")
@click.option("--cache", "cache_dir", help="Cache directory (default from IWASAWA_CACHE_DIR).")
@click.option("--json", "output", help="Write the JSON report to this path.")
@click.option("--threads", type=int, help="Worker threads for independent sub-tasks.")
@click.pass_context
def cli(ctx: click.Context, p: Optional[int], N: Optional[int], theta: Optional[str], prec: Optional[str],
        generator: Optional[str], cache_dir: Optional[str], output: Optional[str], threads: Optional[int]) -> None:
    """Exact p-adic L-functions, Coleman maps and Eisenstein quotients."""
    load_env()
    settings = get_settings()
    configure_logging(settings.log_level, settings.log_json, settings.log_file)
    ctx.ensure_object(dict)
    ctx.obj["fields"] = {
        "p": p,
        "N": N,
        "theta": theta,
        "generator": generator,
        "output": output,
        "cache_dir": cache_dir or settings.cache_dir,
        "threads": threads or settings.threads,
        **_parse_prec(prec),
    }


@cli.command()
@click.option("--convention", type=click.Choice(["main", "testcase"]), default="main")
@click.pass_context
def lfun(ctx: click.Context, convention: str) -> None:
    """xi for theta with its held-out audit, invariants and derivative checks."""
    _execute(ctx, "lfun", convention=convention)


@cli.command()
@click.option("--compare-lfun", is_flag=True, help="Compare Col(z) with the Bernoulli-side xi.")
@click.pass_context
def coleman(ctx: click.Context, compare_lfun: bool) -> None:
    """Col(z) for the theta-fold of the cyclotomic zeta system."""
    _execute(ctx, "coleman", compare_lfun=compare_lfun)


@cli.command()
@click.option("--level", type=int, help="Level M of Gamma_1(M).")
@click.option("--sign", type=click.Choice(["0", "1"]), default="1", help="1 for the plus part, 0 for the full space.")
@click.option("--hecke", "hecke", multiple=True, help="Operator label: T5, U11, <3> or w (repeatable).")
@click.option("--eisenstein", help="'p,theta': the theta-part at level N*p and its Eisenstein quotient.")
@click.option("--varpi", multiple=True, help="'u:v': formal image of the symbol (repeatable).")
@click.option("--matrices", is_flag=True, help="Include operator matrices in the report.")
@click.pass_context
def msym(ctx: click.Context, level: Optional[int], sign: str, hecke: List[str], eisenstein: Optional[str],
         varpi: List[str], matrices: bool) -> None:
    """Manin symbols for Gamma_1(M), Hecke operators and Eisenstein quotients."""
    _execute(ctx, "msym", level=level, sign=int(sign), hecke=list(hecke), eisenstein=eisenstein,
             varpi=list(varpi), matrices=matrices)


@cli.command()
@click.option("--p-max", type=int, default=50)
@click.option("--N-max", "N_max", type=int, default=30)
@click.option("--limit", type=int)
@click.pass_context
def search(ctx: click.Context, p_max: int, N_max: int, limit: Optional[int]) -> None:
    """Eisenstein-irregular (p, N, theta), one JSON line per hit."""
    _execute(ctx, "search", p_max=p_max, N_max=N_max, limit=limit)


@cli.command()
@click.option("--quick", is_flag=True, help="Only the fast identities.")
@click.option("--max-level", "max_level", type=int,
              help="Largest level N*p whose Eisenstein quotient is computed (default from IWASAWA_EISENSTEIN_MAX_LEVEL).")
@click.pass_context
def selftest(ctx: click.Context, quick: bool, max_level: Optional[int]) -> None:
    """Run the acceptance identities end to end."""
    _execute(ctx, "selftest", quick=quick, max_level=max_level)


if __name__ == "__main__":
    cli()
