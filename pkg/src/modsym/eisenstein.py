"""
The theta-part of the Eisenstein quotient at level M = Np.

The theta-part is the psi = theta^-1 eigenspace for <d>[u:v] = [du:dv] of the
cuspidal plus-part, read over W/p^m. The Eisenstein ideal is generated by
T_l - 1 - l psi(l) for l not dividing M and U_l - 1 for l | M, over the primes up to
max(20, Sturm bound). The quotient is compared with W / xi(0), where
xi(0) = L_p(omega^2 theta^-1, -1) = -(1 - theta^-1(p) p) B_{2, theta^-1} / 2.
"""
from math import ceil
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger
from sympy import primerange

from src.characters.dirichlet import DirichletCharacter, teichmuller_character
from src.characters.lvalues import lp_value
from src.characters.search import field_ring, require_theta
from src.jobs.pool import map_ordered
from src.padic.errors import Indeterminate
from src.padic.linalg import Matrix, cokernel_exponent, fitting_diagonal
from src.padic.ring import UnramifiedRing

from .hecke import hecke
from .manin import gamma0_index
from .space import SymbolSpace, build_space

MIN_PRIME_BOUND = 20


def sturm_bound(M: int) -> int:
    """Weight 2: [SL_2(Z) : Gamma_0(M)] / 6."""
    return ceil(gamma0_index(M) / 6)


def eisenstein_primes(M: int) -> List[int]:
    return list(primerange(2, max(MIN_PRIME_BOUND, sturm_bound(M)) + 1))


def _psi(theta: DirichletCharacter, M: int) -> DirichletCharacter:
    psi = theta.inverse()
    return psi if psi.modulus == M else psi.induce(M)


def theta_space(p: int, N: int, theta: DirichletCharacter, m: int) -> SymbolSpace:
    """The plus space at level Np with <d> acting by theta^-1(d), over the field ring of theta."""
    return build_space(N * p, field_ring(p, theta, m), sign=1, character=_psi(theta, N * p))


def _generator_rows(space: SymbolSpace, ell: int, psi: DirichletCharacter) -> Tuple[str, Matrix]:
    ring = space.ring
    M = space.level
    if M % ell:
        op = hecke(space, f"T{ell}")
        a = ring.one() + psi.value(ell, ring) * ell
    else:
        op = hecke(space, f"U{ell}")
        a = ring.one()
    rows = op.on_cuspidal()
    shift = a.coeffs
    out = []
    for i, row in enumerate(rows):
        out.append([ring._sub(x, shift) if i == j else x for j, x in enumerate(row)])
    return op.label, out


def eisenstein_quotient(space: SymbolSpace, p: int, theta: DirichletCharacter, m: int,
                        threads: Optional[int] = None) -> Dict[str, Any]:
    """Order and Fitting diagonal of S^+_theta / I S^+_theta against |W / xi(0)|."""
    M = space.level
    if M % p:
        raise ValueError(f"level {M} is not divisible by p={p}")
    N = M // p
    ring = space.ring
    omega = teichmuller_character(ring)
    require_theta(p, N, theta, omega)
    psi = _psi(theta, M)
    if space.sign != 1 or space.character is None or space.character.key() != psi.key():
        raise ValueError("the space must be the plus space with <d> acting by theta^-1(d)")
    prec = min(m, ring.precision)
    O: UnramifiedRing = ring.with_precision(prec)

    primes = eisenstein_primes(M)
    blocks = map_ordered(lambda ell: _generator_rows(space, ell, psi), primes, threads)
    rank = space.cuspidal_rank
    relations = [[tuple(x % O.mod for x in c) for c in row] for _, rows in blocks for row in rows]
    diagonal = [v for v in fitting_diagonal(O, relations, rank) if v > 0] if rank else []
    exponent = cokernel_exponent(O, relations, rank)

    xi0 = lp_value(omega.power(2) * theta.inverse(), 2, O, omega)
    if xi0.is_zero():
        raise Indeterminate(f"xi(0) vanishes modulo p^{prec}")
    v0 = xi0.valuation()
    expected = O.degree * v0
    checks = {
        "order": exponent == expected,
        "cyclic": len(diagonal) <= 1,
        "commutation": all(op.checks.get("commutes", True) for op in space.operators.values()),
    }
    ok = all(checks.values())
    logger.bind(event="eisenstein_quotient", p=p, N=N).info(
        f"order p^{exponent}, expected p^{expected}, cuspidal rank {rank}")
    return {
        "ok": ok,
        "checks": checks,
        "level": M,
        "precision": prec,
        "cuspidal_rank": rank,
        "primes": primes,
        "operators": [label for label, _ in blocks],
        "order_exponent": exponent,
        "fitting": diagonal,
        "xi0": xi0.to_json(),
        "xi0_valuation": v0,
        "expected_exponent": expected,
    }
