import random

import pytest

from src.padic import Indeterminate, NonDivisible, NonUnitInverse, PadicScalar, UnramifiedRing
from src.padic.errors import ConvergenceDomain, PrecisionExhausted
from src.series import (
    Generator,
    PowerSeries,
    derivative_identity_holds,
    diagonal_identity_holds,
    diagonal_kernel_check,
    diagonalize,
    interpolate,
    tilde_xi_1,
    weierstrass_data,
    xi_n,
)


@pytest.fixture(name="ring")
def ring_fixture():
    return UnramifiedRing.build(5, 1, 6)


@pytest.fixture(name="corpus")
def corpus_fixture(ring):
    rng = random.Random(2024)
    return [PowerSeries.from_coefficients(ring, [rng.randrange(5 ** 6) for _ in range(6)]) for _ in range(100)]


def series(ring, coeffs, trunc=6):
    return PowerSeries.from_coefficients(ring, coeffs, trunc=trunc)


def test_basic_arithmetic(ring):
    """(1+X)(1-X) = 1 - X^2, d/dX X^2 = 2X, (X + X^2)/X = 1 + X."""
    assert series(ring, [1, 1]) * series(ring, [1, -1]) == series(ring, [1, 0, -1])
    assert series(ring, [0, 0, 1]).derivative() == series(ring, [0, 2], trunc=5)
    assert series(ring, [0, 1, 1]).divide_by_x() == series(ring, [1, 1], trunc=5)
    with pytest.raises(NonDivisible):
        series(ring, [1, 1]).divide_by_x()


def test_inverse_of_unit_series(ring):
    """A unit series times its inverse is one; p + X is not a unit."""
    f = series(ring, [2, 3, 4, 1])
    assert f * f.inverse() == PowerSeries.one(ring, 6)
    with pytest.raises(NonUnitInverse):
        series(ring, [5, 1]).inverse()


def test_evaluation(ring):
    """Evaluation at t^s - 1 and at p, with the tail-discounted precision."""
    gen = Generator.build(5, 6)
    f = series(ring, [3, 1, 4])
    assert f.eval_at_ts(0, gen) == ring.from_int(3)
    assert series(ring, [0, 1]).eval_at_ts(1, gen) == ring.from_int(5)
    x = PowerSeries.from_coefficients(ring, [1, 1]).eval_at(PadicScalar(5, 5, 6))
    assert x == ring.from_int(6)
    assert x.precision == 2
    with pytest.raises(ConvergenceDomain):
        f.eval_at(PadicScalar(2, 5, 6))


def test_normalized_generator():
    """(1 - 1/p) log t = 1 in normalized mode."""
    gen = Generator.build(5, 6, mode="normalized")
    assert (gen.log() * 4 / 5) == PadicScalar(1, 5, 6)


def test_weierstrass_examples(ring):
    """p + X, p(1+X) and p + pX + X^2 have the expected invariants."""
    d = weierstrass_data(series(ring, [5, 1]))
    assert (d.mu, d.lam) == (0, 1)
    d = weierstrass_data(series(ring, [5, 5]))
    assert (d.mu, d.lam) == (1, 0)
    d = weierstrass_data(series(ring, [5, 5, 1]))
    assert (d.mu, d.lam) == (0, 2)
    assert d.distinguished == series(ring, [5, 5, 1], trunc=3).reduce(d.precision)


def test_weierstrass_factors_remultiply(ring, corpus):
    """p^mu * P * U reproduces f modulo X^(n - lambda)."""
    for f in corpus[:20]:
        g = f * series(ring, [5, 10, 1])
        d = weierstrass_data(g)
        assert d.lam >= 2 or d.mu > 0
        P = PowerSeries(ring, tuple(list(d.distinguished.coeffs) + [ring._zero] * 6)[:6], d.precision)
        U = PowerSeries(ring, tuple(list(d.unit.coeffs) + [ring._zero] * 6)[:6], d.precision)
        lhs = (P * U).truncate(d.unit.trunc)
        rhs = g.divide_by_p(d.mu) if d.mu else g
        assert lhs.agrees(rhs, trunc=d.unit.trunc)


def test_weierstrass_indeterminate(ring):
    """A series that vanishes at its precision has no certifiable invariants."""
    with pytest.raises(Indeterminate):
        weierstrass_data(PowerSeries.zero(ring, 6))


def test_diagonalize_examples(ring):
    """diagonalize(c) = c and diagonalize(X) = X + V + XV."""
    d = diagonalize(series(ring, [7]))
    assert d.coefficient(0, 0) == ring.from_int(7)
    assert sum(1 for row in d.coeffs for c in row if any(c)) == 1
    d = diagonalize(series(ring, [0, 1]))
    for a, b in [(1, 0), (0, 1), (1, 1)]:
        assert d.coefficient(a, b) == ring.one()
    assert d.coefficient(0, 0) == ring.zero()
    d = diagonalize(series(ring, [0, 0, 1]))
    # (X + V + XV)^2 has X V coefficient 2 and X^2 V^2 coefficient 1
    assert d.coefficient(1, 1) == ring.from_int(2)
    assert d.coefficient(2, 2) == ring.one()
    assert d.coefficient(1, 2) == ring.from_int(2)


def test_xi_n_examples(ring):
    """xi^(1)(X) = X + 1, xi^(1)(c) = 0 and xi^(2)(X^2) = (X+1)^2."""
    assert xi_n(series(ring, [0, 1]), 1) == series(ring, [1, 1], trunc=5)
    assert xi_n(series(ring, [4]), 1).is_zero()
    assert xi_n(series(ring, [0, 0, 1]), 2) == series(ring, [1, 2, 1], trunc=4)
    f = series(ring, [1, 2, 3])
    assert xi_n(f, 0) is f
    with pytest.raises(PrecisionExhausted):
        xi_n(f, 6)


def test_tilde_xi_1_examples(ring):
    """tilde_xi_1(X) = 1 + V, tilde_xi_1(c) = 0, tilde_xi_1(X^2)(0, V) = 2V(V+1)."""
    t = tilde_xi_1(series(ring, [0, 1]))
    assert t.at_x_zero() == series(ring, [1, 1])
    assert t.shape == (5, 6)
    assert tilde_xi_1(series(ring, [3])).is_zero()
    assert tilde_xi_1(series(ring, [0, 0, 1])).at_x_zero() == series(ring, [0, 2, 2])


def test_diagonalization_identity_corpus(corpus):
    """diagonalize(f) = sum_k X^k (x) xi^(k)(f) on the full box for 100 random series."""
    assert all(diagonal_identity_holds(f) for f in corpus)


def test_derivative_identity_corpus(corpus):
    """tilde_xi_1(f) at X = 0 equals xi^(1)(f) for 100 random series."""
    assert all(derivative_identity_holds(f) for f in corpus)


def test_diagonal_kernel_sits_in_high_degree(ring, corpus):
    """Multiplication by diagonalize(f / p^mu) only kills the high total-degree corner."""
    for f in corpus[:10]:
        report = diagonal_kernel_check(f)
        assert report["ok"]
    report = diagonal_kernel_check(series(ring, [25, 5, 10, 5]))
    assert report["ok"]
    assert report["mu"] == 1
    assert report["lambda"] == 1
    assert report["kernel_dim"] > 0


def test_newton_recovers_polynomial():
    """Interpolating a quadratic at t^s - 1 recovers its coefficients."""
    p, m = 5, 12
    ring = UnramifiedRing.build(p, 1, m)
    gen = Generator.build(p, m)
    nodes = [gen.node(s) for s in range(1, 7)]
    values = [ring.from_padic(x * x * 3 + x * 2 + 1) for x in nodes]
    interp = interpolate(ring, nodes, values, precision=6)
    prec, trunc = interp.guaranteed
    assert (prec, trunc) == (3, 4)
    assert interp.series() == PowerSeries.from_coefficients(ring, [1, 2, 3], prec, trunc)
    for x, v in zip(nodes, values):
        assert interp.evaluate(x) == v
    held_out = gen.node(9)
    assert interp.series().eval_at(held_out).agrees(ring.from_padic(held_out * held_out * 3 + held_out * 2 + 1))


def test_newton_rejects_unit_nodes():
    """Nodes must lie in pZ_p."""
    ring = UnramifiedRing.build(5, 1, 6)
    with pytest.raises(ValueError):
        interpolate(ring, [PadicScalar(1, 5, 6)], [ring.one()], precision=6)
