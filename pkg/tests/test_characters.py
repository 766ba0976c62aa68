from fractions import Fraction
import random
import warnings

import pytest

from src.audit.store import CacheStore
from src.characters import (
    BoundExceeded,
    CharacterGroup,
    DirichletCharacter,
    HypothesisViolation,
    OddCharacter,
    bernoulli_number,
    bernoulli_poly,
    check_testcase,
    check_theta,
    find_eisenstein_pairs,
    generalized_bernoulli,
    generalized_bernoulli_exact,
    kronecker_character,
    lp_value,
    require_theta,
    teichmuller_character,
)
from src.padic import UnramifiedRing


@pytest.fixture(name="ring")
def ring_fixture():
    return UnramifiedRing.build(5, 4, 4)


@pytest.fixture(name="omega")
def omega_fixture(ring):
    return teichmuller_character(ring)


def test_bernoulli_table():
    """B_0, B_1, B_2, B_3 and B_12 from the table."""
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(3) == 0
    assert bernoulli_number(12) == Fraction(-691, 2730)


def test_bernoulli_bound():
    """Indices past the configured bound are refused."""
    with pytest.raises(BoundExceeded):
        bernoulli_number(50, bound=40)


def test_bernoulli_polynomial():
    """B_2(x) = x^2 - x + 1/6 and B_k(0) = B_k."""
    x = Fraction(2, 7)
    assert bernoulli_poly(2, x) == x * x - x + Fraction(1, 6)
    for k in range(8):
        assert bernoulli_poly(k, Fraction(0)) == bernoulli_number(k)


def test_teichmuller_character(ring, omega):
    """omega(a) is a 4th root of unity congruent to a mod 5."""
    for a in range(1, 5):
        w = omega.value(a, ring)
        assert w.agrees(ring.from_int(a), 1)
        assert w ** 4 == ring.one()
    assert omega.value(5, ring) == ring.zero()
    assert omega.is_primitive()
    assert not omega.is_even()


def test_multiplicativity_and_conductor():
    """chi(ab) = chi(a) chi(b); inducing then taking the primitive part is the identity."""
    rng = random.Random(7)
    group = CharacterGroup.of(60)
    chars = list(group.characters())
    for _ in range(20):
        chi = rng.choice(chars)
        a, b = rng.randrange(1, 60), rng.randrange(1, 60)
        ea, eb, eab = chi.exponent(a), chi.exponent(b), chi.exponent(a * b)
        if ea is None or eb is None:
            assert eab is None
        else:
            assert (ea + eb) % 1 == eab
        prim = chi.primitive()
        assert prim.induce(180).primitive() == prim
        assert prim.conductor == chi.conductor


def test_kronecker_character():
    """chi_24 is even, primitive of conductor 24, trivial at 5 and -1 at 7."""
    chi = kronecker_character(24)
    assert chi.is_even()
    assert chi.conductor == 24
    assert chi.exponent(5) == 0
    assert chi.exponent(7) == Fraction(1, 2)
    assert chi.order == 2


def test_kronecker_character_is_warning_free():
    """Building and evaluating chi_D emits no deprecation warnings."""
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        chi = kronecker_character(-4) * kronecker_character(5)
        assert chi.conductor == 20
        assert kronecker_character(12).exponent(5) == Fraction(1, 2)


def test_generalized_bernoulli_examples(ring, omega):
    """B_{2,1} = 1/6, odd characters give B_2 = 0, and B_{1,omega} = 3 mod 5."""
    assert generalized_bernoulli_exact(2, DirichletCharacter.trivial(1)) == {0: Fraction(1, 6)}
    assert generalized_bernoulli_exact(2, omega) == {}
    assert generalized_bernoulli(1, omega, ring).agrees(ring.from_int(3), 1)


def test_generalized_bernoulli_two_ways():
    """B_{1,chi} for the trivial character mod 7 matches (1/f) sum a - (1/2) sum 1."""
    chi = DirichletCharacter.trivial(7)
    direct = Fraction(sum(range(1, 7)), 7) - Fraction(6, 2)
    exact = generalized_bernoulli_exact(1, chi)
    assert sum(exact.values(), Fraction(0)) == direct


def test_lp_value_at_zero(ring, omega):
    """L_p(omega^2, 0) = -B_{1,omega} = 2 mod 5 with a trivial Euler factor."""
    value = lp_value(omega.power(2), 1, ring, omega)
    assert value.agrees(ring.from_int(2), 1)
    assert value.precision == ring.precision


def test_lp_value_precision_and_congruence(ring, omega):
    """Dividing by n = 5 costs one digit; values at n and n + (p-1) agree mod p."""
    chi = omega.power(2)
    at_five = lp_value(chi, 5, ring, omega)
    assert at_five.precision == ring.precision - 1
    assert at_five.agrees(lp_value(chi, 1, ring, omega), 1)


def test_lp_value_rejects_odd(ring, omega):
    """Odd characters have no p-adic L-function."""
    with pytest.raises(OddCharacter):
        lp_value(omega, 2, ring, omega)


def test_check_theta_filters(ring, omega):
    """Odd characters and omega^2 fail the hypothesis; reasons are reported."""
    odd = check_theta(5, 1, omega, omega)
    assert not odd["ok"]
    assert "theta is odd" in odd["reasons"]
    assert not check_theta(5, 1, omega.power(2), omega)["ok"]
    with pytest.raises(HypothesisViolation):
        require_theta(5, 1, omega.power(2), omega)


def test_check_testcase():
    """chi_24 is admissible at p = 5; the trivial character is not."""
    assert check_testcase(5, 24, kronecker_character(24))["ok"]
    assert not check_testcase(5, 24, DirichletCharacter.trivial(24))["ok"]
    assert not check_testcase(7, 24, kronecker_character(24))["ok"]


def test_search_finds_irregular_pair():
    """At p = 37, N = 1 the first hit is omega^6, coming from 37 | B_32."""
    hits = find_eisenstein_pairs([37], [1], precision=2, limit=1)
    assert len(hits) == 1
    hit = hits[0]
    assert (hit.p, hit.N, hit.omega_power) == (37, 1, 6)
    assert hit.bernoulli_valuation >= 1
    assert hit.theta.is_even()


def test_search_skips_small_window():
    """p = 5 and N = 1 has no Eisenstein-irregular character."""
    assert find_eisenstein_pairs([5, 7], [1]) == []


def test_bernoulli_store_round_trip(tmp_path):
    """Cached Bernoulli numbers survive a reload and are written once."""
    store = CacheStore(str(tmp_path))
    table = {0: Fraction(1), 1: Fraction(-1, 2), 12: Fraction(-691, 2730)}
    assert store.save_bernoulli(table) == 3
    assert store.save_bernoulli(table) == 0
    assert store.load_bernoulli() == table
    assert not CacheStore(None).enabled
