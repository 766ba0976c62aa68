import os
from datetime import datetime, timedelta

import orjson
import pytest
from click.testing import CliRunner
from pydantic import ValidationError

from app import cli
from src.characters import find_eisenstein_pairs, kronecker_character, teichmuller_character
from src.characters import use_store as use_bernoulli_store
from src.jobs.config import ConfigError, JobConfig, check_config, parse_eisenstein, parse_pair, parse_theta
from src.jobs.pool import map_ordered
from src.jobs.report import Report, build_markdown_summary
from src.jobs.run import run
from src.jobs import selftest
from src.jobs.selftest import QUICK, SUITE, SelfTestRun, check_eisenstein
from src.modsym import use_store as use_heilbronn_store
from src.padic import UnramifiedRing
from src.settings import get_settings


@pytest.fixture(name="runner")
def runner_fixture():
    yield CliRunner()
    use_bernoulli_store(None)
    use_heilbronn_store(None)


@pytest.fixture(name="msym11")
def msym11_fixture():
    return JobConfig(command="msym", p=101, m=2, level=11, hecke=["T2", "T3"], varpi=["1:2"])


def test_config_constraints():
    """p >= 3, m >= 1 and threads >= 1 are enforced by the model."""
    with pytest.raises(ValidationError):
        JobConfig(command="lfun", p=2)
    with pytest.raises(ValidationError):
        JobConfig(command="lfun", m=0)
    with pytest.raises(ValidationError):
        JobConfig(command="lfun", threads=0)


def test_check_config_reasons():
    """Each missing or inconsistent option contributes one reason."""
    result = check_config(JobConfig(command="lfun"))
    assert not result["ok"]
    assert any("--p" in r for r in result["reasons"])
    assert any("--theta" in r for r in result["reasons"])
    result = check_config(JobConfig(command="lfun", p=5, n=5, theta="kronecker:24"))
    assert result["reasons"] == ["n=5 must stay below p=5"]
    assert not check_config(JobConfig(command="msym"))["ok"]
    assert not check_config(JobConfig(command="msym", level=11))["ok"]
    assert not check_config(JobConfig(command="nope"))["ok"]
    assert not check_config(JobConfig(command="lfun", p=9, theta="kronecker:24"))["ok"]
    assert check_config(JobConfig(command="msym", eisenstein="37,omega:6"))["ok"]
    assert check_config(JobConfig(command="search"))["ok"]


def test_parse_theta():
    """Kronecker, generator-image and Teichmuller components and their products."""
    assert parse_theta("kronecker:24").key() == kronecker_character(24).key()
    chi = parse_theta("chi:5:2")
    assert (chi.modulus, chi.order, chi.is_even()) == (5, 2, True)
    omega = teichmuller_character(UnramifiedRing.for_orders(37, [36], 3))
    assert parse_theta("omega:6", 37).key() == omega.power(6).key()
    assert parse_theta("omega:2*omega:4", 37).key() == omega.power(6).key()
    product = parse_theta("kronecker:5*omega:2", 7)
    assert product.modulus == 35
    for bad in ("", "omega:2", "zeta:3", "kronecker:x", "kronecker:1", "chi:5:1,1"):
        with pytest.raises(ConfigError):
            parse_theta(bad)


def test_parse_pairs():
    """'p,theta' and 'u:v' parse; malformed strings are config errors."""
    assert parse_eisenstein("37, omega:6") == (37, "omega:6")
    assert parse_pair("3:-7") == (3, -7)
    with pytest.raises(ConfigError):
        parse_eisenstein("37")
    with pytest.raises(ConfigError):
        parse_pair("3,7")


def test_report_verdict_and_summary():
    """A single failing assertion fails the report and shows in the table."""
    report = Report("lfun", {"p": 5})
    assert report.ok
    report.check("held_out_nodes", True, precision=3)
    report.check("mu_zero", False)
    doc = orjson.loads(report.dumps())
    assert doc["schema"] == 1
    assert doc["ok"] is False
    assert [a["name"] for a in doc["assertions"]] == ["held_out_nodes", "mu_zero"]
    start = datetime(2024, 1, 1)
    summary = build_markdown_summary(report, start, start + timedelta(seconds=3), "out.json")
    assert "| Assertion" in summary
    assert "FAIL" in summary
    assert "out.json" in summary


def test_map_ordered_keeps_order():
    """Results come back in input order for any worker count."""
    items = list(range(20))
    assert map_ordered(lambda x: x * x, items, threads=4) == [x * x for x in items]
    assert map_ordered(lambda x: x * x, items, threads=1) == [x * x for x in items]


def test_run_msym(msym11):
    """Level 11: one cusp form, T2 and T3 commute and the report is deterministic."""
    report = run(msym11)
    assert report.ok, report.assertions
    assert report.results["space"]["cuspidal_rank"] == 1
    assert [op["label"] for op in report.results["operators"]] == ["T2", "T3"]
    assert report.results["varpi"] == [{"symbol": [1, 2], "formal": [[1, 2, 1]]}]
    assert run(msym11).dumps() == report.dumps()


def test_run_rejects_invalid_config():
    """run validates before dispatch."""
    with pytest.raises(ConfigError):
        run(JobConfig(command="coleman", p=5))


def test_run_search():
    """The first irregular pair below p = 37 with N = 1 is omega^6 at 37."""
    report = run(JobConfig(command="search", p_max=37, N_max=1, limit=1))
    assert report.ok
    (hit,) = report.results["hits"]
    assert (hit["p"], hit["N"], hit["omega_power"]) == (37, 1, 6)


def test_selftest_quick_runs_only_quick_checks():
    """--quick covers the quick-tagged identities and all of them pass."""
    report = run(JobConfig(command="selftest", quick=True))
    assert [a["name"] for a in report.assertions] == [c.name for c in SUITE if c.tag == QUICK]
    assert report.ok, report.assertions


def test_eisenstein_fixtures_above_the_level_cap_are_reported(monkeypatch):
    """Fixtures above max_level show up as skipped, and the fixture search runs once per run."""
    hits = find_eisenstein_pairs([37], [1], precision=3, limit=1)
    calls = []

    def search(*args, **kwargs):
        calls.append(args)
        return hits

    monkeypatch.setattr(selftest, "find_eisenstein_pairs", search)
    ctx = SelfTestRun(max_level=36)
    result = check_eisenstein(ctx)
    assert result["skipped"] == [{"p": 37, "N": 1, "level": 37}]
    assert result["fixtures"] == []
    assert not result["ok"]
    assert ctx.eisenstein_fixtures() is hits
    assert len(calls) == 1


def test_eisenstein_level_cap_setting(monkeypatch):
    """The cap comes from IWASAWA_EISENSTEIN_MAX_LEVEL and must be positive in a job."""
    monkeypatch.setenv("IWASAWA_EISENSTEIN_MAX_LEVEL", "120")
    assert get_settings().eisenstein_max_level == 120
    with pytest.raises(ValidationError):
        JobConfig(command="selftest", max_level=0)


def test_cli_msym(runner, tmp_path):
    """msym prints the report, writes it with --json and caches the Heilbronn sets."""
    out = tmp_path / "report.json"
    result = runner.invoke(cli, ["--p", "101", "--prec", "2,1", "--cache", str(tmp_path), "--json", str(out),
                                 "msym", "--level", "11", "--hecke", "T2"])
    assert result.exit_code == 0, result.output
    doc = orjson.loads(result.stdout)
    assert doc["ok"]
    assert doc["config"]["level"] == 11
    assert orjson.loads(out.read_bytes()) == doc
    assert os.path.exists(os.path.join(str(tmp_path), "heilbronn", "2.json"))
    assert "msym report" in result.stderr


def test_cli_search_json_lines(runner, tmp_path):
    """search emits one JSON object per line."""
    result = runner.invoke(cli, ["--cache", str(tmp_path), "search", "--p-max", "37", "--N-max", "1", "--limit", "1"])
    assert result.exit_code == 0, result.output
    lines = [line for line in result.stdout.splitlines() if line.strip()]
    assert len(lines) == 1
    assert orjson.loads(lines[0])["p"] == 37


def test_cli_error_tags(runner, tmp_path):
    """Config and input errors map to a tagged message and exit code 1."""
    result = runner.invoke(cli, ["--cache", str(tmp_path), "msym"])
    assert result.exit_code == 1
    assert "[Config]" in result.stderr
    result = runner.invoke(cli, ["--p", "5", "--theta", "kronecker:24", "--prec", "2,5", "--cache", str(tmp_path), "lfun"])
    assert result.exit_code == 1
    assert "must stay below p" in result.stderr
    result = runner.invoke(cli, ["--p", "101", "--prec", "2", "--cache", str(tmp_path), "msym", "--level", "11",
                                 "--hecke", "T11"])
    assert result.exit_code == 1
    assert "[Input]" in result.stderr
