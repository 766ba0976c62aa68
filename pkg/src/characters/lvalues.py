from typing import Optional

from loguru import logger

from src.padic.ring import ExtScalar, UnramifiedRing

from .bernoulli import generalized_bernoulli
from .dirichlet import DirichletCharacter, teichmuller_character
from .errors import OddCharacter


def twist_by_omega(chi: DirichletCharacter, n: int, omega: DirichletCharacter) -> DirichletCharacter:
    """The primitive character attached to chi * omega^(-n)."""
    return (chi * omega.power(-n)).primitive()


def lp_value(chi: DirichletCharacter, n: int, ring: UnramifiedRing,
             omega: Optional[DirichletCharacter] = None) -> ExtScalar:
    """
    L_p(chi, 1 - n) = -(1 - chi'(p) p^(n-1)) B_{n,chi'} / n with chi' = chi omega^(-n) primitive.
    The division by n costs v_p(n) digits.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not chi.is_even():
        raise OddCharacter(f"{chi!r} is odd")
    omega = omega or teichmuller_character(ring)
    twisted = twist_by_omega(chi, n, omega)
    # chi omega^-n (-1) * (-1)^n = chi(-1) = 1
    assert twisted.parity * (-1) ** n == 1
    p = ring.p
    euler = ring.one() - twisted.value(p, ring) * (p ** (n - 1))
    bern = generalized_bernoulli(n, twisted, ring)
    value = -(euler * bern) / n
    logger.bind(event="lp_value", p=p, n=n).debug(f"conductor={twisted.conductor} value={value!r}")
    return value
