import pytest

from src.characters import HypothesisViolation, kronecker_character, lp_value, teichmuller_character
from src.lfun import (
    audit_window,
    derivative_ratio,
    invariants,
    kubota_leopoldt,
    lp_derivative_fd,
    mirror_check,
    mirror_series,
    xi_prime,
)
from src.padic import UnramifiedRing
from src.series import Generator, PowerSeries, xi_n


@pytest.fixture(name="theta")
def theta_fixture():
    return kronecker_character(24)


@pytest.fixture(name="gen")
def gen_fixture():
    return Generator.build(5, 12)


@pytest.fixture(name="xi")
def xi_fixture(theta, gen):
    return kubota_leopoldt(theta, "main", 3, 3, gen)


def test_constant_term_contract(xi):
    """xi(0) = L_p(omega^2 theta^-1, -1) = -(1 - 5) B_{2,chi_24} / 2 = 24."""
    assert xi.guaranteed == (3, 3)
    assert xi.series[0] == xi.ring.from_int(24)
    assert xi.value_at(2) == lp_value(xi.character, 2, xi.interpolation.ring, xi.omega)


def test_held_out_audit(xi):
    """Both guard nodes and a wider window satisfy the interpolation contract."""
    assert len(xi.audit) == 2
    assert all(entry["ok"] for entry in xi.audit)
    assert all(entry["ok"] for entry in audit_window(xi, list(range(1, 10))))


def test_unit_series_has_trivial_invariants(xi):
    """p does not divide B_{2,theta^-1}, so xi is a unit and mu = lambda = 0."""
    result = invariants(xi)
    assert (result["mu"], result["lambda"]) == (0, 0)
    assert result["certified"]


def test_invariants_of_manufactured_series():
    """p + X has mu = 0 and lambda = 1."""
    ring = UnramifiedRing.build(5, 1, 4)
    result = invariants(PowerSeries.from_coefficients(ring, [5, 1], trunc=4))
    assert (result["mu"], result["lambda"]) == (0, 1)


def test_threads_do_not_change_the_series(theta, gen, xi):
    """The worker pool keeps node order, so the series is identical."""
    parallel = kubota_leopoldt(theta, "main", 3, 3, gen, threads=3)
    assert parallel.series == xi.series


def test_testcase_convention(theta, gen):
    """The test-case series interpolates L_p(theta, 1 - k) at t^k - 1."""
    xi_tc = kubota_leopoldt(theta, "testcase", 3, 3, gen)
    assert xi_tc.node_exponent(4) == 4
    assert all(entry["ok"] for entry in audit_window(xi_tc, [1, 2, 3, 4, 5]))


@pytest.fixture(name="omega37")
def omega37_fixture():
    return teichmuller_character(UnramifiedRing.for_orders(37, [36], 3))


def test_mirror_substitution(theta, gen):
    """xi_main(theta)(X) = xi_testcase(omega^2 theta^-1)(t^2 (1 + X)^-1 - 1), coefficient by coefficient."""
    result = mirror_check(theta, 3, 3, gen)
    assert result["ok"], result
    assert [entry["precision"] for entry in result["coefficients"]] == [3, 2, 1]
    assert len(result["checked"]) == 5
    assert all("lp_precision" in entry for entry in result["checked"] if entry["s"] <= 1)


def test_mirror_series_is_an_involution(gen):
    """Substituting twice gives back the series at the precision of each coefficient."""
    ring = UnramifiedRing.build(5, 1, 4)
    f = PowerSeries.from_coefficients(ring, [3, 7, 11, 2], trunc=4)
    twice = mirror_series(mirror_series(f, gen), gen)
    for j in range(4):
        assert twice[j].agrees(f[j], min(4, 4 - j))


def test_mirror_substitution_on_irregular_series(omega37):
    """At p = 37 the omega^6 series has lambda = 1 and still mirrors."""
    result = mirror_check(omega37.power(6), 3, 3, Generator.build(37, 12))
    assert result["ok"], result


def test_mirror_check_rejects_swapped_nodes(monkeypatch, omega37):
    """Nodes placed with the two conventions exchanged break the defining values."""
    import importlib

    kl = importlib.import_module("src.lfun.kubota_leopoldt")

    monkeypatch.setattr(kl, "node_exponent", lambda convention, k: k if convention == "main" else 2 - k)
    result = mirror_check(omega37.power(6), 3, 3, Generator.build(37, 12))
    assert not result["ok"]
    assert not all(entry["ok"] for entry in result["checked"])


def test_xi_prime_of_constant():
    """The derivative series of a constant vanishes."""
    ring = UnramifiedRing.build(5, 1, 4)
    const = PowerSeries.from_coefficients(ring, [7], trunc=4)
    assert xi_n(const, 1).is_zero()


def test_finite_difference_matches_log_t(xi):
    """The s-derivative finite difference equals log(t) xi^(1)(t^s - 1) modulo p^(h+2), at two values of s."""
    assert xi_prime(xi).trunc == 2
    for s, h in ((0, 0), (-4, 1)):
        report = derivative_ratio(xi, s, h)
        assert report["ok"], report
        assert report["precision"] >= 2


def test_finite_difference_range(xi):
    """Steps that leave the interpolation nodes are refused."""
    with pytest.raises(ValueError):
        lp_derivative_fd(xi, 1, 1)


def test_convention_constraints(gen):
    """An odd theta and theta = omega^2 are rejected; n must stay below p."""
    ring = UnramifiedRing.build(5, 4, 4)
    omega = teichmuller_character(ring)
    with pytest.raises(HypothesisViolation):
        kubota_leopoldt(omega, "main", 2, 2, gen)
    with pytest.raises(HypothesisViolation):
        kubota_leopoldt(omega.power(2), "main", 2, 2, gen)
    with pytest.raises(ValueError):
        kubota_leopoldt(kronecker_character(24), "main", 2, 5, gen)
