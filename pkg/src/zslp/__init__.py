"""Regex search over RePair-compressed text, without decompression."""

from .automaton import (
    Fsa,
    NewlinePatternError,
    PatternSyntaxError,
    compile_pattern,
    nfa_accepts,
)
from .engine import (
    CountInfo,
    GrammarSearch,
    SearchStats,
    collect_stats,
    contains_match,
    count_combine,
    count_matching_lines,
    init_terminals,
    run_count,
)
from .oracle import oracle_count, oracle_lines
from .repair import CompressionReport, compress, compression_report
from .reporter import report_matching_lines
from .slp import (
    BadMagicError,
    InvalidGrammarError,
    Rule,
    Slp,
    SlpFormatError,
    TruncatedStreamError,
    decode_slp,
    encode_slp,
    expand,
    expand_symbol,
    validate_slp,
)

__all__ = [
    "BadMagicError",
    "CompressionReport",
    "CountInfo",
    "Fsa",
    "GrammarSearch",
    "InvalidGrammarError",
    "NewlinePatternError",
    "PatternSyntaxError",
    "Rule",
    "SearchStats",
    "Slp",
    "SlpFormatError",
    "TruncatedStreamError",
    "collect_stats",
    "compile_pattern",
    "compress",
    "compression_report",
    "contains_match",
    "count_combine",
    "count_matching_lines",
    "decode_slp",
    "encode_slp",
    "expand",
    "expand_symbol",
    "init_terminals",
    "nfa_accepts",
    "oracle_count",
    "oracle_lines",
    "report_matching_lines",
    "run_count",
    "validate_slp",
]

__version__ = "0.1.0"
