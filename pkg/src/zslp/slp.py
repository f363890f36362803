"""Straight-line programs with multi-symbol axioms, plus their binary format.

A grammar is an ordered list of binary rules over symbol ids. Ids 0..255
denote the terminal bytes; id 256+i denotes the variable defined by rule i
(dense numbering, so symbol tables can be plain arrays). Every right-hand
symbol of a rule must be a terminal or an earlier variable, which makes the
rule list topologically ordered by construction. The axiom is a non-empty
symbol sequence; the text the grammar derives is the concatenation of the
axiom symbols' expansions. A length-1 axiom is allowed so that one-byte
inputs have a representation.

The "ZSLP" binary format:

    magic "ZSLP" | version byte (1) | varint rule count p
    | p * (varint first, varint second)      -- left ids are implicit/dense
    | varint axiom length | varints axiom symbols

Varints are unsigned LEB128 (7 bits per byte, little-endian, high bit =
continuation). Rules are stored before the axiom and in definition order, so
a consumer can process them one at a time without holding the whole grammar.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import BinaryIO, Iterator

FIRST_VARIABLE = 256
MAGIC = b"ZSLP"
VERSION = 1


class SlpFormatError(ValueError):
    """Malformed ZSLP stream."""


class BadMagicError(SlpFormatError):
    """Stream does not start with the ZSLP magic."""


class TruncatedStreamError(SlpFormatError):
    """Stream ended in the middle of a field."""


class InvalidGrammarError(ValueError):
    """Grammar violates a structural invariant."""


def is_terminal(sym: int) -> bool:
    return 0 <= sym < FIRST_VARIABLE


@dataclass(frozen=True)
class Rule:
    """One binary rule: ``left -> first second``."""

    left: int
    first: int
    second: int


@dataclass(frozen=True)
class Slp:
    """An immutable grammar: binary rules plus the residual axiom sequence."""

    rules: tuple[Rule, ...]
    axiom: tuple[int, ...]

    @classmethod
    def from_pairs(cls, pairs, axiom) -> "Slp":
        """Build a grammar from (first, second) pairs with dense left ids."""
        rules = tuple(
            Rule(FIRST_VARIABLE + i, first, second)
            for i, (first, second) in enumerate(pairs)
        )
        return cls(rules, tuple(axiom))

    def is_defined(self, sym: int) -> bool:
        return 0 <= sym < FIRST_VARIABLE + len(self.rules)


def validate_slp(slp: Slp) -> list[str]:
    """Check all grammar invariants; an empty list means the grammar is valid."""
    violations = []
    for i, rule in enumerate(slp.rules, start=1):
        expected_left = FIRST_VARIABLE + i - 1
        if rule.left != expected_left:
            violations.append(
                f"rule {i} has left id {rule.left}, expected {expected_left}"
            )
        for sym in (rule.first, rule.second):
            if sym < 0 or sym >= rule.left:
                violations.append(
                    f"rule {i} references undefined/later symbol {sym}"
                )
    if not slp.axiom:
        violations.append("empty axiom")
    limit = FIRST_VARIABLE + len(slp.rules)
    for pos, sym in enumerate(slp.axiom):
        if sym < 0 or sym >= limit:
            violations.append(f"axiom position {pos} references undefined symbol {sym}")
    return violations


def _require_valid(slp: Slp) -> None:
    violations = validate_slp(slp)
    if violations:
        raise InvalidGrammarError("; ".join(violations))


def expand_symbol(slp: Slp, sym: int) -> bytes:
    """Return the unique byte string the symbol derives."""
    if not slp.is_defined(sym) or sym < 0:
        raise InvalidGrammarError(f"undefined symbol {sym}")
    out = bytearray()
    stack = [sym]
    rules = slp.rules
    while stack:
        t = stack.pop()
        if t < FIRST_VARIABLE:
            out.append(t)
        else:
            rule = rules[t - FIRST_VARIABLE]
            stack.append(rule.second)
            stack.append(rule.first)
    return bytes(out)


def expand(slp: Slp) -> bytes:
    """Fully decompress: concatenated expansion of the axiom, left to right."""
    _require_valid(slp)
    return b"".join(iter_expand(slp))


def iter_expand(slp: Slp, chunk_size: int = 65536) -> Iterator[bytes]:
    """Yield the expansion in chunks without materialising it all at once."""
    out = bytearray()
    rules = slp.rules
    stack = list(reversed(slp.axiom))
    while stack:
        t = stack.pop()
        if t < FIRST_VARIABLE:
            out.append(t)
            if len(out) >= chunk_size:
                yield bytes(out)
                out.clear()
        else:
            rule = rules[t - FIRST_VARIABLE]
            stack.append(rule.second)
            stack.append(rule.first)
    if out:
        yield bytes(out)


def _write_uvarint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError(f"varint value must be non-negative, got {value}")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_uvarint(stream: BinaryIO) -> int:
    result = 0
    shift = 0
    while True:
        chunk = stream.read(1)
        if not chunk:
            raise TruncatedStreamError("stream ended inside a varint")
        byte = chunk[0]
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result
        shift += 7
        if shift > 63:
            raise SlpFormatError("varint too long")


def encode_slp(slp: Slp) -> bytes:
    """Serialise a valid grammar to the ZSLP byte format."""
    _require_valid(slp)
    out = bytearray()
    out += MAGIC
    out.append(VERSION)
    _write_uvarint(out, len(slp.rules))
    for rule in slp.rules:
        _write_uvarint(out, rule.first)
        _write_uvarint(out, rule.second)
    _write_uvarint(out, len(slp.axiom))
    for sym in slp.axiom:
        _write_uvarint(out, sym)
    return bytes(out)


class ZslpReader:
    """Streaming ZSLP reader: rules come one at a time, then the axiom.

    The header is parsed on construction. ``iter_rules`` must be exhausted
    before ``read_axiom`` is called; both validate the structural invariants
    as they go, so a consumer never sees an out-of-order or undefined symbol.
    """

    def __init__(self, stream: BinaryIO):
        self._stream = stream
        magic = stream.read(len(MAGIC))
        if len(magic) < len(MAGIC):
            raise TruncatedStreamError("stream ended inside the magic")
        if magic != MAGIC:
            raise BadMagicError(f"bad magic {magic!r}")
        version = stream.read(1)
        if not version:
            raise TruncatedStreamError("stream ended before the version byte")
        if version[0] != VERSION:
            raise SlpFormatError(f"unsupported version {version[0]}")
        self.rule_count = _read_uvarint(stream)
        self._rules_read = 0

    def iter_rules(self) -> Iterator[tuple[int, int]]:
        """Yield (first, second) for each rule, in definition order."""
        while self._rules_read < self.rule_count:
            left = FIRST_VARIABLE + self._rules_read
            first = _read_uvarint(self._stream)
            second = _read_uvarint(self._stream)
            if first >= left or second >= left:
                raise SlpFormatError(
                    f"rule {self._rules_read + 1} references undefined/later "
                    f"symbol {max(first, second)}"
                )
            self._rules_read += 1
            yield first, second

    def read_axiom(self) -> tuple[int, ...]:
        if self._rules_read < self.rule_count:
            raise SlpFormatError("axiom read before all rules were consumed")
        length = _read_uvarint(self._stream)
        if length == 0:
            raise SlpFormatError("empty axiom")
        limit = FIRST_VARIABLE + self.rule_count
        axiom = []
        for _ in range(length):
            sym = _read_uvarint(self._stream)
            if sym >= limit:
                raise SlpFormatError(f"axiom references undefined symbol {sym}")
            axiom.append(sym)
        return tuple(axiom)


def decode_slp(data: bytes) -> Slp:
    """Parse ZSLP bytes into a grammar, rejecting malformed streams."""
    stream = io.BytesIO(data)
    reader = ZslpReader(stream)
    pairs = list(reader.iter_rules())
    axiom = reader.read_axiom()
    if stream.read(1):
        raise SlpFormatError("trailing data after axiom")
    return Slp.from_pairs(pairs, axiom)
