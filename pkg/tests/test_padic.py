import random

import pytest

from src.padic import (
    ConvergenceDomain,
    NonUnit,
    NonUnitInverse,
    PadicScalar,
    PrecisionExhausted,
    RamifiedRing,
    UnramifiedRing,
    padic_exp,
    padic_log,
    log_unit,
    teichmuller,
)
from src.padic.errors import Indeterminate
from src.padic.linalg import cokernel_exponent, relation_quotient, smith_form


@pytest.fixture(name="w9")
def w9_fixture():
    # Z_5[zeta_3] has residue degree 2
    return UnramifiedRing.build(5, 3, 4)


def test_addition_tracks_valuation():
    """2 + 3 in Z/5^3 is 5, of valuation 1 at precision 3."""
    s = PadicScalar(2, 5, 3) + PadicScalar(3, 5, 3)
    assert s.value == 5
    assert s.valuation() == 1
    assert s.precision == 3


def test_inverse_of_two():
    """inverse(2) mod 125 is 63."""
    assert PadicScalar(2, 5, 3).inverse().value == 63
    assert PadicScalar(1, 5, 3).inverse().value == 1


def test_inverse_of_non_unit_raises():
    """Only units can be inverted."""
    with pytest.raises(NonUnitInverse):
        PadicScalar(10, 5, 3).inverse()


def test_division_by_p_costs_precision():
    """Dividing by p^k lowers the precision by k."""
    x = PadicScalar(50, 5, 4).divide_by_p(2)
    assert x.value == 2
    assert x.precision == 2
    with pytest.raises(PrecisionExhausted):
        PadicScalar(0, 5, 1).divide_by_p(1)


def test_teichmuller_values():
    """omega(1) = 1, omega(-1) = -1 and omega(2) = 57 mod 125."""
    assert teichmuller(PadicScalar(1, 5, 3)).value == 1
    assert teichmuller(PadicScalar(4, 5, 3)).value == 124
    w = teichmuller(PadicScalar(2, 5, 3))
    assert w.value == 57
    assert (w * w).value == 124
    with pytest.raises(NonUnit):
        teichmuller(PadicScalar(5, 5, 3))


def test_teichmuller_is_multiplicative():
    """omega(ab) = omega(a) omega(b)."""
    rng = random.Random(7)
    for _ in range(20):
        a, b = rng.randrange(1, 7), rng.randrange(1, 7)
        lhs = teichmuller(PadicScalar(a * b, 7, 5))
        rhs = teichmuller(PadicScalar(a, 7, 5)) * teichmuller(PadicScalar(b, 7, 5))
        assert lhs == rhs


def test_ring_axioms_randomized(w9):
    """Distributivity and valuation additivity hold for random elements."""
    rng = random.Random(11)
    mod = w9.mod
    for _ in range(30):
        a, b, c = (w9.element([rng.randrange(mod) for _ in range(w9.degree)]) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        if not a.is_zero() and not b.is_zero():
            prod = a * b
            if a.valuation() + b.valuation() < prod.precision:
                assert prod.valuation() == a.valuation() + b.valuation()


def test_frobenius_has_order_residue_degree(w9):
    """Frobenius raises zeta to zeta^p and has order f."""
    z = w9.zeta()
    assert w9.degree == 2
    assert z.frobenius() == z ** 5
    assert z.frobenius(2) == z
    a = w9.element([3, 7])
    b = w9.element([2, 11])
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_log_homomorphism():
    """log((1+p)^2) = 2 log(1+p), log(1) = 0."""
    u = PadicScalar(6, 5, 6)
    assert padic_log(PadicScalar(1, 5, 6)).value == 0
    assert padic_log(u * u) == padic_log(u) * 2


def test_exp_log_round_trip():
    """exp(log(1+p)) = 1+p at the stated precision."""
    u = PadicScalar(6, 5, 6)
    assert padic_exp(padic_log(u)) == u


def test_log_domain_checks():
    """log needs a 1-unit and exp a small argument."""
    with pytest.raises(ConvergenceDomain):
        padic_log(PadicScalar(2, 5, 4))
    with pytest.raises(ConvergenceDomain):
        padic_exp(PadicScalar(2, 5, 4))


def test_log_unit_kills_torsion(w9):
    """log_unit vanishes on roots of unity and is a homomorphism."""
    assert log_unit(w9.zeta()).is_zero()
    u = w9.element([2, 1])
    v = w9.element([1, 3])
    assert log_unit(u * v) == log_unit(u) + log_unit(v)


def test_ramified_norm_of_one_minus_zeta():
    """prod_j (1 - zeta_p^j) = p inside W[zeta_p]."""
    base = UnramifiedRing.build(5, 1, 4)
    R = RamifiedRing.over(base)
    acc = R.from_base(base.one())
    for j in range(1, 5):
        acc = acc * (R.from_base(base.one()) - R.zeta_p(j))
    assert acc.in_base()
    assert acc.to_base() == base.from_int(5)
    assert R.pi().valuation() == 1
    assert (R.zeta_p() ** 5).to_base() == base.one()


def test_relation_quotient_rank():
    """Two independent unit relations on four generators leave rank two."""
    ring = UnramifiedRing.build(5, 1, 3)
    one, minus = ring._one, ring._neg(ring._one)
    rels = [{0: one, 1: minus}, {2: one, 3: one}]
    basis = relation_quotient(ring, 4, rels)
    assert basis.rank == 2
    assert basis.reduce({0: one}) == basis.reduce({1: one})
    assert basis.reduce({2: one, 3: one}) == [ring._zero] * 2


def test_smith_form_and_cokernel():
    """diag(5, 25) has Fitting valuations (1, 2) and cokernel of order 5^3."""
    ring = UnramifiedRing.build(5, 1, 4)
    A = [[ring._from_int(5), ring._from_int(0)], [ring._from_int(0), ring._from_int(25)]]
    assert sorted(smith_form(ring, A).valuations) == [1, 2]
    assert cokernel_exponent(ring, A, 2) == 3
    with pytest.raises(Indeterminate):
        cokernel_exponent(ring, [[ring._from_int(5), ring._from_int(0)]], 2)


def test_smith_kernel_is_annihilated():
    """Columns of the kernel block are killed by the matrix."""
    ring = UnramifiedRing.build(7, 1, 3)
    A = [[ring._from_int(1), ring._from_int(2), ring._from_int(3)],
         [ring._from_int(2), ring._from_int(4), ring._from_int(6)]]
    smith = smith_form(ring, A)
    kernel = smith.kernel()
    assert len(kernel) == 2
    for vec in kernel:
        for row in A:
            acc = ring._zero
            for a, b in zip(row, vec):
                acc = ring._add(acc, ring._mul(a, b))
            assert not any(acc)
