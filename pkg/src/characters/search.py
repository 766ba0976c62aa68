"""
Search for Eisenstein-irregular triples (p, N, theta):
- p >= 5 prime with p not dividing N * phi(N)
- theta = chi_N * omega^i even, chi_N primitive mod N, so theta has conductor N or Np
- theta differs from 1 and omega^2
- theta omega^-1 is nontrivial on (Z/p)^x or chi_N(p) != 1
- p divides B_{2, theta^-1}
Galois-conjugate characters (theta ~ theta^p) are reported once.
"""
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

from loguru import logger
from sympy import isprime, totient

from src.padic.ring import UnramifiedRing

from .bernoulli import generalized_bernoulli
from .dirichlet import CharacterGroup, DirichletCharacter, teichmuller_character
from .errors import HypothesisViolation


@dataclass(frozen=True)
class EisensteinTriple:
    p: int
    N: int
    theta: DirichletCharacter
    omega_power: int
    field_order: int
    bernoulli_valuation: int
    orbit_size: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "N": self.N,
            "theta": self.theta.to_json(),
            "omega_power": self.omega_power,
            "field_order": self.field_order,
            "bernoulli_valuation": self.bernoulli_valuation,
            "orbit_size": self.orbit_size,
        }


def primitive_characters(N: int) -> List[DirichletCharacter]:
    return [chi for chi in CharacterGroup.of(N).characters() if chi.is_primitive()]


def check_theta(p: int, N: int, theta: DirichletCharacter, omega: DirichletCharacter) -> Dict[str, Any]:
    """Conditions (b)-(d) and the ambient filters; (a) is the Bernoulli test."""
    reasons: List[str] = []
    ok = True
    if p < 5 or not isprime(p):
        ok = False
        reasons.append(f"p={p} must be a prime >= 5")
    if N % p == 0 or int(totient(N)) % p == 0:
        ok = False
        reasons.append(f"p={p} divides N*phi(N) for N={N}")
    if not theta.is_even():
        ok = False
        reasons.append("theta is odd")
    if theta.conductor not in (N, N * p):
        ok = False
        reasons.append(f"conductor {theta.conductor} is neither N nor Np")
    prim = theta.primitive()
    if prim.is_trivial() or prim == omega.power(2).primitive():
        ok = False
        reasons.append("theta is 1 or omega^2")
    if ok:
        at_p = (theta * omega.inverse()).component(p)
        at_N = theta.component(N)
        if at_p.is_trivial() and at_N.exponent(p) == 0:
            ok = False
            reasons.append("theta omega^-1 is trivial on (Z/p)^x and theta(p) = 1 on the N-part")
    return {"ok": ok, "reasons": reasons}


def require_theta(p: int, N: int, theta: DirichletCharacter, omega: DirichletCharacter) -> None:
    result = check_theta(p, N, theta, omega)
    if not result["ok"]:
        raise HypothesisViolation("; ".join(result["reasons"]))


def check_testcase(p: int, N: int, theta: DirichletCharacter) -> Dict[str, Any]:
    """Admissibility for the cyclotomic test case: theta mod N even, nontrivial, primitive, theta(p) = 1."""
    reasons: List[str] = []
    ok = True
    if theta.modulus != N or N % p == 0:
        ok = False
        reasons.append(f"theta must be a character mod N={N} prime to p")
    else:
        if not theta.is_even():
            ok = False
            reasons.append("theta is odd")
        if theta.is_trivial():
            ok = False
            reasons.append("theta is trivial")
        if not theta.is_primitive():
            ok = False
            reasons.append("theta is not primitive")
        if theta.exponent(p) != 0:
            ok = False
            reasons.append("theta is nontrivial on the decomposition group at p")
    return {"ok": ok, "reasons": reasons}


def field_ring(p: int, chi: DirichletCharacter, precision: int, extra: Iterable[int] = ()) -> UnramifiedRing:
    """The coefficient ring Z_p[zeta_E], E = lcm(order, p - 1, extra), in which omega-twists of chi are read."""
    return UnramifiedRing.for_orders(p, [chi.order, p - 1, *extra], precision)


def bernoulli_valuation(theta: DirichletCharacter, ring: UnramifiedRing) -> int:
    """v_p(B_{2, theta^-1}) capped at the ring precision."""
    inv = theta.inverse().primitive()
    return generalized_bernoulli(2, inv, ring).valuation()


def find_eisenstein_pairs(p_values: Iterable[int], N_values: Iterable[int], precision: int = 3,
                          limit: Optional[int] = None) -> List[EisensteinTriple]:
    hits: List[EisensteinTriple] = []
    N_values = list(N_values)
    for p in p_values:
        if p < 5 or not isprime(p):
            continue
        for N in N_values:
            if N % p == 0 or int(totient(N)) % p == 0:
                continue
            seen: Set[Tuple[Any, ...]] = set()
            for chi in primitive_characters(N):
                ring = field_ring(p, chi, precision)
                omega = teichmuller_character(ring)
                for i in range(p - 1):
                    if chi.parity * (-1) ** i != 1:
                        continue
                    if i == 1 and chi.exponent(p) == 0:
                        continue
                    if N == 1 and i in (0, 2):
                        continue
                    theta = chi * omega.power(i)
                    key = theta.orbit_key(p)
                    if key in seen:
                        continue
                    seen.add(key)
                    v = bernoulli_valuation(theta, ring)
                    if v == 0:
                        continue
                    hit = EisensteinTriple(p, N, theta, i, ring.order, v, len(theta.galois_orbit(p)))
                    logger.bind(event="eisenstein_hit", p=p, N=N).info(f"omega^{i} twist, v_p(B_2)={v}")
                    hits.append(hit)
                    if limit is not None and len(hits) >= limit:
                        return hits
    return hits
