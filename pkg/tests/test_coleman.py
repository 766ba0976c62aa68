import pytest

from src.characters import kronecker_character
from src.coleman import testcase as convention_testcase
from src.coleman import (
    ColemanSeries,
    CyclotomicLayer,
    InsufficientLayers,
    MeasurePlan,
    ModulePresentation,
    NormFailure,
    NormSystem,
    SigmaAction,
    capstone,
    check_norms,
    col_vs_flat_check,
    coleman_flat,
    coleman_measure,
    coleman_series,
    four_term_sequence,
    intermediate_modules,
)
from src.lfun import kubota_leopoldt
from src.padic import UnramifiedRing
from src.padic.errors import ConvergenceDomain
from src.series import Generator, PowerSeries


@pytest.fixture(name="W")
def w_fixture():
    return UnramifiedRing.for_orders(5, [3, 4], 6)


@pytest.fixture(name="f0")
def f0_fixture(W):
    c = W.root_of_unity(3)
    return PowerSeries.from_coefficients(W, [W.one() - c, -c])


@pytest.fixture(name="O")
def o_fixture():
    return UnramifiedRing.build(5, 1, 4)


def test_layer_arithmetic(W):
    """zeta_25 has order 25 and the sum of the primitive 5th roots is -1."""
    layer = CyclotomicLayer.of(W, 2)
    assert layer.dim == 20
    assert layer.y_power(25) == layer.one()
    total = layer.zero()
    for a in range(1, 5):
        total = layer.add(total, layer.y_power(5 * a))
    assert layer.agrees(total, layer.sub(layer.zero(), layer.one()), 6)


def test_cyclotomic_system_is_norm_compatible(W, f0):
    """The zeta system passes every norm check and its series is 1 - zeta_3 (1 + T)."""
    system = NormSystem.cyclotomic(W, 3, 1, r_max=2)
    report = check_norms(system)
    assert report["ok"], report["reasons"]
    assert len(report["checked"]) == 2
    result = coleman_series(system)
    assert result.series == f0
    assert all(entry["ok"] for entry in result.audit)


@pytest.mark.parametrize("anchored,precision,trunc", [(True, 4, 25), (False, 5, 24)])
def test_recovery_from_layers(W, f0, anchored, precision, trunc):
    """Layers generated from f0 give back f0 modulo the recovery modulus."""
    system = NormSystem.from_series(f0, 2, anchored=anchored)
    result = coleman_series(system)
    assert result.layers == 2
    assert result.series.precision == precision
    assert result.series.trunc == trunc
    padded = PowerSeries.from_coefficients(W, f0.coefficients(), trunc=trunc)
    assert result.series.agrees(padded)


def test_incompatible_layers_are_rejected(W):
    """1 + T^2 does not come from a norm-compatible system."""
    f = PowerSeries.from_coefficients(W, [1, 0, 1])
    system = NormSystem.from_series(f, 2)
    assert not check_norms(system)["ok"]
    with pytest.raises(NormFailure):
        coleman_series(system)


def test_certified_truncation(W, f0):
    """Two anchored layers pin f only to p^2 modulo T^5 and nothing beyond T^25."""
    result = coleman_series(NormSystem.from_series(f0, 2))
    assert result.certified_precision(5) == 2
    assert result.certified(2, 5).agrees(PowerSeries.from_coefficients(W, f0.coefficients(), trunc=5))
    with pytest.raises(InsufficientLayers):
        result.certified(3, 5)
    with pytest.raises(InsufficientLayers):
        result.certified(1, 30)


def test_teichmuller_constant_has_zero_measure(W):
    """A root-of-unity system has vanishing transform."""
    result = coleman_series(NormSystem.constant(W, 4, 1))
    mu = coleman_measure(result, 8)
    assert mu.transform.is_zero()


def test_measure_audits(W):
    """psi by trace equals psi by Frobenius, traces vanish, and moments agree with Mahler coefficients."""
    mu = coleman_measure(coleman_series(NormSystem.cyclotomic(W, 3, 1, r_max=1)), 20)
    assert {entry["check"] for entry in mu.checks} == {"psi", "trace"}
    assert all(entry["ok"] for entry in mu.checks)
    for s in range(3):
        parts = mu.class_moments(s)
        total = parts[0]
        for part in parts[1:]:
            total = total + part
        assert total.agrees(mu.mahler_moment(s), 2)
        assert total.agrees(mu.moment(s), 2)


def test_pole_is_rejected(W):
    """f(0) = p lies outside the domain of the measure."""
    f = ColemanSeries(PowerSeries.from_coefficients(W, [5, 1]), None, True, True)
    with pytest.raises(ConvergenceDomain):
        coleman_measure(f, 8)


def test_flat_map_values(W):
    """p and roots of unity map to zero and the map is a homomorphism."""
    u = W.from_int(7)
    assert coleman_flat(W.from_int(5)).is_zero()
    assert coleman_flat(W.one()).is_zero()
    assert coleman_flat(W.root_of_unity(4)).is_zero()
    assert coleman_flat(u * u) == coleman_flat(u) * 2


def test_col_vs_flat():
    """(1 - Fr^-1) H(0) equals the flat map of the corestriction, also after a Teichmuller twist."""
    plan = MeasurePlan.of(5, 2, 1)
    W = UnramifiedRing.for_orders(5, [3, 4], plan.ring_precision)
    g = Generator.build(5, 10)
    zeta = NormSystem.cyclotomic(W, 3, 1, r_max=1)
    plain = col_vs_flat_check([(W.one(), zeta)], g, 2)
    assert plain["ok"]
    twisted = col_vs_flat_check([(W.one(), zeta.product(NormSystem.constant(W, 4, 1, r_max=1)))], g, 2)
    assert twisted["ok"]
    assert twisted["lhs"] == plain["lhs"]
    flat = col_vs_flat_check([(W.one(), NormSystem.constant(W, 4, 1, r_max=1))], g, 2)
    assert flat["ok"]


def test_capstone():
    """The theta-fold of the zeta system lands on tau(theta^-1) xi_testcase for theta = chi_24 at p = 5."""
    theta = kronecker_character(24)
    report = capstone(5, 24, theta, 2, 2, Generator.build(5, 12))
    assert report["checks"]["series"]
    assert report["checks"]["moments"]
    assert report["ok"], report["checks"]
    assert report["convention"]["normalization"].startswith("Col(z) = -H")


def test_split_case(O):
    """Trivial sigma: F^star = F^dagger + D and F^dagger has rank lambda + 1."""
    alpha = PowerSeries.from_coefficients(O, [5, 1], trunc=6)
    modules = intermediate_modules(alpha, SigmaAction.trivial(O))
    assert modules.pole
    assert modules.fdag.ngens == 2
    assert modules.sequence().ok
    assert modules.split_check().ok
    assert modules.z_quo_check().ok


def test_simple_case(O):
    """sigma = 1 + p: A-bar = O/p, the sequence is exact and the pushout map is injective."""
    alpha = PowerSeries.from_coefficients(O, [5, 1], trunc=6)
    modules = intermediate_modules(alpha, SigmaAction.scalar(O, O.from_int(6)))
    assert not modules.pole
    assert modules.abar.invariants().order_exponent == 1
    sequence = modules.sequence()
    assert sequence.ok, sequence.checks
    simple = modules.simple_check()
    assert simple.ok, simple.checks
    assert simple.details["ideal_index"] == 1
    assert modules.z_quo_check().ok


def test_root_of_unity_action():
    """sigma acting by a nontrivial root of unity makes A-bar vanish."""
    O = UnramifiedRing.build(5, 4, 4)
    alpha = PowerSeries.from_coefficients(O, [5, 1], trunc=6)
    modules = intermediate_modules(alpha, SigmaAction.scalar(O, O.root_of_unity(4)))
    assert modules.abar.invariants().order_exponent == 0
    assert modules.sequence().ok
    assert modules.simple_check().ok


def test_presentation_invariants(O):
    """O/p has one torsion factor and O^2 is free."""
    assert ModulePresentation.cyclic(O, O.from_int(5).coeffs).invariants().torsion == (1,)
    assert ModulePresentation.free(O, 2).invariants().rank == 2


def test_four_term_sequence(O):
    """xi = p + X: Lambda/xi -> F/xi F has cokernel O/p and the orders alternate."""
    report = four_term_sequence(PowerSeries.from_coefficients(O, [5, 1], trunc=6))
    assert report["ok"], report["checks"]
    assert report["lambda"] == 1
    assert report["index_exponent"] == 1


def test_testcase_sequences():
    """The test-case xi gives exact sequences with z-dagger lifting the canonical map."""
    theta = kronecker_character(24)
    xi = kubota_leopoldt(theta, "testcase", 3, 3, Generator.build(5, 12))
    report = convention_testcase.testcase_sequences(5, 24, theta, xi)
    assert report["ok"], report
    assert report["modules"]["pole"]
    assert "split" in report
