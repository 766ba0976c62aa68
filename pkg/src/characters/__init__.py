from .errors import CharacterError, BoundExceeded, OddCharacter, HypothesisViolation
from .dirichlet import CharacterGroup, DirichletCharacter, teichmuller_character, kronecker_character
from .bernoulli import (
    bernoulli_number,
    bernoulli_numbers,
    bernoulli_poly,
    generalized_bernoulli,
    generalized_bernoulli_exact,
    use_store,
)
from .lvalues import lp_value, twist_by_omega
from .search import (
    EisensteinTriple,
    bernoulli_valuation,
    check_testcase,
    check_theta,
    field_ring,
    find_eisenstein_pairs,
    primitive_characters,
    require_theta,
)

__all__ = [
    "CharacterError",
    "BoundExceeded",
    "OddCharacter",
    "HypothesisViolation",
    "CharacterGroup",
    "DirichletCharacter",
    "teichmuller_character",
    "kronecker_character",
    "bernoulli_number",
    "bernoulli_numbers",
    "bernoulli_poly",
    "generalized_bernoulli",
    "generalized_bernoulli_exact",
    "use_store",
    "lp_value",
    "twist_by_omega",
    "EisensteinTriple",
    "bernoulli_valuation",
    "check_testcase",
    "check_theta",
    "field_ring",
    "find_eisenstein_pairs",
    "primitive_characters",
    "require_theta",
]
