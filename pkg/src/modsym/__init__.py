from .errors import InadmissiblePair, ModsymError, ZeroIndex
from .manin import ManinSymbols, cusp_count, cusp_key, gamma0_index, gamma1_index, genus, manin_symbols, zero_to
from .space import SymbolSpace, build_space
from .heilbronn import merel_set, use_store
from .hecke import HeckeOperator, hecke, parse_label
from .symbols import cd_combination, cd_symbol, varpi_formal
from .eisenstein import eisenstein_primes, eisenstein_quotient, sturm_bound, theta_space

__all__ = [
    "InadmissiblePair",
    "ModsymError",
    "ZeroIndex",
    "ManinSymbols",
    "cusp_count",
    "cusp_key",
    "gamma0_index",
    "gamma1_index",
    "genus",
    "manin_symbols",
    "zero_to",
    "SymbolSpace",
    "build_space",
    "merel_set",
    "use_store",
    "HeckeOperator",
    "hecke",
    "parse_label",
    "cd_combination",
    "cd_symbol",
    "varpi_formal",
    "eisenstein_primes",
    "eisenstein_quotient",
    "sturm_bound",
    "theta_space",
]
