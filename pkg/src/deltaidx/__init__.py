"""Compressed text index over a delta-bounded run-length grammar."""

from .alphabet import Alphabet
from .bundle import dumps, load, loads, save
from .compressor import CompressorConfig, compress, phrase_boundaries
from .errors import BundleFormatError, InvalidArgumentError, UnsupportedError
from .extraction import (FingerprintTable, extract_prefix, extract_substring,
                         extract_suffix, fingerprint_substring)
from .harness import naive_locate, verify
from .kernels import BACKEND
from .measures import delta_bound_term, fact_sum_check, substring_complexity
from .pattern import candidate_cuts, parse_pattern
from .query import Index, IndexConfig, ShortTrie, build_index
from .rlslp import RLSLP, Rule, build_grammar_tree, symbol_weights

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "BACKEND", "BundleFormatError", "CompressorConfig", "FingerprintTable", "Index",
    "IndexConfig", "InvalidArgumentError", "RLSLP", "Rule", "ShortTrie", "UnsupportedError",
    "build_grammar_tree", "build_index", "candidate_cuts", "compress", "delta_bound_term",
    "dumps", "extract_prefix", "extract_substring", "extract_suffix", "fact_sum_check",
    "fingerprint_substring", "load", "loads", "naive_locate", "parse_pattern",
    "phrase_boundaries", "save", "substring_complexity", "symbol_weights", "verify",
]
