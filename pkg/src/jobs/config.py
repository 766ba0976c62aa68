"""
Job configuration: one validated JobConfig per invocation.

theta specs, joined with "*" for products:
- kronecker:D      the quadratic character of discriminant D
- chi:f:a,b,...    chi(g_i) = zeta_{ord g_i}^{a_i} on the fixed generators of (Z/f)^x
- omega:i          omega^i mod p (needs p)
"""
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field
from sympy import isprime

from src.characters.dirichlet import CharacterGroup, DirichletCharacter, kronecker_character, teichmuller_character
from src.characters.search import field_ring
from src.lfun.kubota_leopoldt import CONVENTIONS
from src.series.generator import MODES

COMMANDS = ("lfun", "coleman", "msym", "search", "selftest")


class ConfigError(Exception):
    pass


class JobConfig(BaseModel):
    """
    Resolved configuration of a single run; it is echoed verbatim in the report.
    - command: lfun, coleman, msym, search or selftest
    - p, N, theta: the prime, the tame level and the theta spec
    - m, n: target precision p^m and truncation X^n
    - generator: simple (t = 1 + p) or normalized
    - convention: main or testcase (lfun only)
    - level, sign, hecke, eisenstein, varpi, matrices: msym options
    - p_max, N_max, limit: search window
    - quick, max_level: selftest scope; max_level defaults to IWASAWA_EISENSTEIN_MAX_LEVEL
    """
    command: str
    p: Optional[int] = Field(default=None, ge=3)
    N: int = Field(default=1, ge=1)
    theta: Optional[str] = None
    m: int = Field(default=3, ge=1)
    n: int = Field(default=3, ge=1)
    generator: str = "simple"
    convention: str = "main"
    output: Optional[str] = None
    cache_dir: Optional[str] = None
    threads: int = Field(default=1, ge=1)
    compare_lfun: bool = False
    level: Optional[int] = Field(default=None, ge=3)
    sign: int = 1
    hecke: List[str] = Field(default_factory=list)
    eisenstein: Optional[str] = None
    varpi: List[str] = Field(default_factory=list)
    matrices: bool = False
    p_max: int = Field(default=50, ge=5)
    N_max: int = Field(default=30, ge=1)
    limit: Optional[int] = Field(default=None, ge=1)
    quick: bool = False
    max_level: Optional[int] = Field(default=None, ge=1)

    def resolved(self) -> Dict[str, Any]:
        return self.model_dump()


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{what}: {text!r} is not an integer") from None


def parse_theta(spec: str, p: Optional[int] = None) -> DirichletCharacter:
    base: Optional[DirichletCharacter] = None
    omega_power: Optional[int] = None
    parts = [part.strip() for part in spec.split("*") if part.strip()]
    if not parts:
        raise ConfigError("empty theta spec")
    for part in parts:
        kind, _, rest = part.partition(":")
        if kind == "kronecker":
            D = _int(rest, "kronecker discriminant")
            if D in (0, 1):
                raise ConfigError(f"kronecker:{D} is not a nontrivial discriminant")
            chi = kronecker_character(D)
        elif kind == "chi":
            f, _, images = rest.partition(":")
            group = CharacterGroup.of(_int(f, "chi modulus"))
            try:
                chi = group.character([_int(x, "generator image") for x in images.split(",") if x.strip()])
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        elif kind == "omega":
            omega_power = (omega_power or 0) + _int(rest, "omega power")
            continue
        else:
            raise ConfigError(f"unknown theta component {part!r}")
        base = chi if base is None else base * chi
    if omega_power is None:
        return base
    if p is None:
        raise ConfigError("omega:i needs p")
    # omega is read in the field ring of the tame part so that both share zeta_E
    omega = teichmuller_character(field_ring(p, base or DirichletCharacter.trivial(), 1))
    twist = omega.power(omega_power)
    return twist if base is None else base * twist


def parse_eisenstein(spec: str) -> Tuple[int, str]:
    """'p,theta' -> (p, theta spec)."""
    head, sep, theta = spec.partition(",")
    if not sep or not theta.strip():
        raise ConfigError(f"eisenstein spec {spec!r} is not 'p,theta'")
    return _int(head.strip(), "eisenstein prime"), theta.strip()


def parse_pair(spec: str) -> Tuple[int, int]:
    """'u:v' -> (u, v)."""
    u, sep, v = spec.partition(":")
    if not sep:
        raise ConfigError(f"symbol {spec!r} is not 'u:v'")
    return _int(u.strip(), "u"), _int(v.strip(), "v")


def msym_level(config: JobConfig) -> int:
    if config.eisenstein:
        p, _ = parse_eisenstein(config.eisenstein)
        return config.N * p
    return config.level


def check_config(config: JobConfig) -> Dict[str, Any]:
    """
    Module preconditions checked before dispatch. Returns a dict with 'ok' and 'reasons'.
    - lfun and coleman need a prime p, a theta spec and n < p
    - msym needs a level or an eisenstein spec, and a prime for the coefficient ring
    """
    reasons: List[str] = []
    ok = True

    if config.command not in COMMANDS:
        ok = False
        reasons.append(f"unknown command {config.command!r}")
    if config.generator not in MODES:
        ok = False
        reasons.append(f"generator must be one of {MODES}")
    if config.convention not in CONVENTIONS:
        ok = False
        reasons.append(f"convention must be one of {CONVENTIONS}")
    if config.p is not None and not isprime(config.p):
        ok = False
        reasons.append(f"p={config.p} is not prime")

    if config.command in ("lfun", "coleman"):
        if config.p is None:
            ok = False
            reasons.append(f"{config.command} needs --p")
        elif config.n >= config.p:
            ok = False
            reasons.append(f"n={config.n} must stay below p={config.p}")
        if not config.theta:
            ok = False
            reasons.append(f"{config.command} needs --theta")
        elif config.p is not None:
            try:
                parse_theta(config.theta, config.p)
            except ConfigError as exc:
                ok = False
                reasons.append(str(exc))

    if config.command == "msym":
        if config.sign not in (0, 1):
            ok = False
            reasons.append("sign must be 0 (full space) or 1 (plus part)")
        if config.eisenstein:
            try:
                p, spec = parse_eisenstein(config.eisenstein)
                if not isprime(p):
                    raise ConfigError(f"eisenstein prime {p} is not prime")
                parse_theta(spec, p)
                if config.level is not None and config.level != config.N * p:
                    raise ConfigError(f"level {config.level} differs from N*p = {config.N * p}")
            except ConfigError as exc:
                ok = False
                reasons.append(str(exc))
        elif config.level is None:
            ok = False
            reasons.append("msym needs --level or --eisenstein")
        elif config.p is None:
            ok = False
            reasons.append("msym needs --p for the coefficient ring")
        for spec in config.varpi:
            try:
                parse_pair(spec)
            except ConfigError as exc:
                ok = False
                reasons.append(str(exc))

    return {"ok": ok, "reasons": reasons}


def validate(config: JobConfig) -> JobConfig:
    result = check_config(config)
    if not result["ok"]:
        raise ConfigError("; ".join(result["reasons"]))
    return config
