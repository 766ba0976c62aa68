import os
import random

import pytest

from src.audit.store import CacheStore
from src.characters import find_eisenstein_pairs, teichmuller_character
from src.modsym import (
    InadmissiblePair,
    ZeroIndex,
    build_space,
    cd_combination,
    cd_symbol,
    cusp_count,
    eisenstein_quotient,
    genus,
    hecke,
    manin_symbols,
    merel_set,
    sturm_bound,
    theta_space,
    use_store,
    varpi_formal,
)
from src.modsym.manin import lift_to_sl2
from src.padic import UnramifiedRing


@pytest.fixture(name="R")
def r_fixture():
    return UnramifiedRing.build(101, 1, 2)


@pytest.fixture(name="plus11")
def plus11_fixture(R):
    return build_space(11, R, sign=1)


def _sum(space, *vectors):
    ring = space.ring
    out = space.zero()
    for vec in vectors:
        out = [ring._add(a, b) for a, b in zip(out, vec)]
    return out


def test_symbol_count():
    """P^1(Z/11) for Gamma_1 has (11^2 - 1) / 2 classes."""
    assert len(manin_symbols(11)) == 60


def test_oracles():
    """Known genera and cusp counts of X_1(M)."""
    assert [genus(M) for M in (3, 4, 5, 11, 13, 37)] == [0, 0, 0, 1, 2, 40]
    assert [cusp_count(M) for M in (3, 4, 5, 11, 37)] == [2, 3, 4, 10, 36]


@pytest.mark.parametrize("M", range(3, 41))
def test_ranks_match_genus(R, M):
    """Full rank is 2g + c - 1, the cusps are all found and the cuspidal plus-part has rank g."""
    full = build_space(M, R)
    assert full.cusp_basis.rank == cusp_count(M)
    assert full.rank == 2 * genus(M) + cusp_count(M) - 1
    assert full.cuspidal_rank == 2 * genus(M)
    assert build_space(M, R, sign=1).cuspidal_rank == genus(M)


def test_manin_relations_hold(R):
    """Two-term, sign and the three-term form [u:v] = [u:u+v] + [u+v:v] vanish in the quotient."""
    space = build_space(11, R)
    ring = space.ring
    for u, v in space.symbols:
        x = space.symbol(u, v)
        assert x == space.symbol(-u, -v)
        assert space.is_zero(_sum(space, x, space.symbol(-v, u)))
        three = [ring._sub(ring._sub(a, b), c)
                 for a, b, c in zip(x, space.symbol(u, u + v), space.symbol(u + v, v))]
        assert space.is_zero(three)


def test_boundary_kills_cuspidal(R):
    """Every cuspidal basis vector has zero boundary."""
    space = build_space(13, R)
    for s in space.cuspidal:
        assert space.is_zero(space.boundary_of(s))


def test_t2_at_level_11(R, plus11):
    """The cusp form of level 11 has a_2 = -2, a_3 = -1, a_5 = 1, a_7 = -2."""
    assert plus11.cuspidal_rank == 1
    for label, a in (("T2", -2), ("T3", -1), ("T5", 1), ("T7", -2)):
        assert hecke(plus11, label).on_cuspidal() == [[R._from_int(a)]]


def test_hecke_commutes_and_diamonds(R):
    """T and U commute, <1> is the identity and <2><3> = <6>, also on random vectors."""
    space = build_space(13, R)
    ops = [hecke(space, label) for label in ("T2", "T3", "U13", "<2>", "<3>")]
    assert all(op.checks["commutes"] for op in ops)
    six = hecke(space, "<6>")
    assert ops[3].then(ops[4]) == six.matrix
    one = hecke(space, "<1>")
    assert one.matrix == [[R._one if i == j else R._zero for j in range(space.rank)] for i in range(space.rank)]
    rng = random.Random(7)
    for _ in range(5):
        x = [R._from_int(rng.randrange(101 ** 2)) for _ in range(space.rank)]
        assert ops[1].apply(ops[0].apply(x)) == ops[0].apply(ops[1].apply(x))


def test_label_checks(plus11):
    """T at a level prime, U away from the level and composite indices are refused."""
    with pytest.raises(ValueError):
        hecke(plus11, "T11")
    with pytest.raises(ValueError):
        hecke(plus11, "U3")
    with pytest.raises(ValueError):
        hecke(plus11, "T4")
    with pytest.raises(ValueError):
        hecke(plus11, "<11>")


def test_lift_to_sl2():
    """Bottom rows mod M lift to determinant-one matrices with the same bottom row mod M."""
    rng = random.Random(11)
    for M in (11, 20, 37):
        for _ in range(20):
            c, d = rng.randrange(M), rng.randrange(M)
            if manin_symbols(M).normalize(c, d) is None:
                continue
            a, b, c2, d2 = lift_to_sl2(c, d, M)
            assert a * d2 - b * c2 == 1
            assert (c2 - c) % M == 0 and (d2 - d) % M == 0


@pytest.mark.parametrize("M", [11, 13, 20])
def test_atkin_lehner_is_an_involution(R, M):
    """w_M squares to the identity on the full space."""
    assert hecke(build_space(M, R), "w").checks["involution"]


def test_merel_set_and_cache(tmp_path):
    """X_2 has four matrices of determinant 2; sets are cached per n."""
    assert sorted(merel_set(2)) == [(1, 0, 0, 2), (1, 0, 1, 2), (2, 0, 0, 1), (2, 1, 0, 1)]
    assert all(a * d - b * c == 7 and a > b >= 0 and d > c >= 0 for a, b, c, d in merel_set(7))
    use_store(CacheStore(str(tmp_path)))
    try:
        fresh = merel_set(5)
        assert os.path.exists(os.path.join(str(tmp_path), "heilbronn", "5.json"))
        assert CacheStore(str(tmp_path)).load_heilbronn(5) == list(fresh)
    finally:
        use_store(None)


def test_cd_symbol_specializes(plus11):
    """c = d = 1 or -1 mod 11 collapses to (c^2 - 1)^2 [u:v] on the plus part."""
    for c in (23, 43):
        for u, v in ((1, 2), (3, 7), (0, 1)):
            assert cd_symbol(plus11, c, c, u, v) == plus11.combination({(u, v): (c * c - 1) ** 2})


def test_cd_symbol_two_term(plus11):
    """cd[u:v] = -dc[-v:u] by the two-term relation."""
    lhs = cd_symbol(plus11, 5, 7, 1, 2)
    rhs = cd_symbol(plus11, 7, 5, -2, 1)
    assert plus11.is_zero(_sum(plus11, lhs, rhs))


def test_cd_symbol_rejects():
    """c, d must exceed 1 and be prime to 6M; [u:v] must be a symbol."""
    with pytest.raises(InadmissiblePair):
        cd_combination(11, 3, 5, 1, 2)
    with pytest.raises(InadmissiblePair):
        cd_combination(11, 1, 5, 1, 2)
    with pytest.raises(InadmissiblePair):
        cd_combination(11, 5, 7, 0, 0)


def test_varpi_formal(plus11):
    """Antisymmetry, dropped diagonal, linearity and the cd expansion."""
    assert varpi_formal(plus11, {(1, 2): 1, (2, 1): 1}) == {}
    assert varpi_formal(plus11, {(3, 3): 4}) == {}
    assert varpi_formal(plus11, {(2, 1): 3}) == {(1, 2): -3}
    a, b = {(1, 2): 2}, {(4, 9): -1}
    assert varpi_formal(plus11, {**a, **b}) == {**varpi_formal(plus11, a), **varpi_formal(plus11, b)}
    expansion = varpi_formal(plus11, cd_combination(11, 5, 7, 1, 2))
    assert expansion == {(1, 2): 1225, (1, 3): -25, (2, 5): 49, (3, 5): -1}
    with pytest.raises(ZeroIndex):
        varpi_formal(plus11, {(0, 1): 1})


def test_sturm_bound():
    """[SL_2 : Gamma_0(37)] / 6 rounds up to 7."""
    assert sturm_bound(37) == 7


def test_eisenstein_quotient_irregular():
    """At p = 37 the omega^6 part has Eisenstein quotient of order 37^v(xi(0))."""
    theta = find_eisenstein_pairs([37], [1], precision=3, limit=1)[0].theta
    space = theta_space(37, 1, theta, 3)
    report = eisenstein_quotient(space, 37, theta, 3)
    assert report["ok"], report["checks"]
    assert report["order_exponent"] == report["expected_exponent"] >= 1
    assert report["fitting"] == [report["xi0_valuation"]]


def test_eisenstein_quotient_regular():
    """omega^4 at p = 37 is regular and the quotient is trivial."""
    omega = teichmuller_character(UnramifiedRing.for_orders(37, [36], 3))
    theta = omega.power(4)
    report = eisenstein_quotient(theta_space(37, 1, theta, 3), 37, theta, 3)
    assert report["ok"], report["checks"]
    assert report["order_exponent"] == 0


def test_eisenstein_needs_theta_space():
    """A space without the character is refused."""
    W = UnramifiedRing.for_orders(11, [10], 3)
    omega = teichmuller_character(W)
    with pytest.raises(ValueError):
        eisenstein_quotient(build_space(11, W, sign=1), 11, omega.power(4), 3)
