"""Lazy top-down decompression that emits only the matching lines.

A counting pass runs first so that every symbol carries its counting tuple
and saturated transitions. The grammar is then walked top-down, keeping one
line of state: the bytes of the current line so far, the set of automaton
states reachable from an initial state by reading some suffix of it, and
whether the line already matched.

A subtree may be skipped when nothing of it can appear in a matching line:
it must span a newline (so lines after it do not depend on what precedes
it), contain no matching closed line, have non-matching first and last
lines, the current line must not have matched already, and no automaton run
through the pending suffix states may complete a match inside the subtree's
head. Skipping discards the current line (it provably cannot match) and
re-seeds the suffix states from the subtree's own transitions. The skipped
subtree's trailing line fragment is remembered by symbol id: if a later
byte completes a match on that same line, exactly that fragment is expanded
after the fact so the emitted line is byte-identical to the uncompressed
one. Disabling pruning never changes the output.
"""

from __future__ import annotations

from .automaton import Fsa
from .engine import GrammarSearch
from .slp import FIRST_VARIABLE, InvalidGrammarError, Slp, expand_symbol, iter_expand, validate_slp


def _report_every_line(slp: Slp, sink) -> int:
    """Full decompression path for patterns that match the empty string."""
    emitted = 0
    buffer = bytearray()
    for chunk in iter_expand(slp):
        start = 0
        while True:
            cut = chunk.find(b"\n", start)
            if cut == -1:
                buffer += chunk[start:]
                break
            buffer += chunk[start:cut]
            buffer += b"\n"
            sink.write(bytes(buffer))
            emitted += 1
            buffer.clear()
            start = cut + 1
    if buffer:
        buffer += b"\n"
        sink.write(bytes(buffer))
        emitted += 1
    return emitted


def _tail_after_last_newline(slp: Slp, entries, sym: int) -> bytes:
    """Expansion of the symbol after its last newline (possibly empty)."""
    suffix_parts = []
    cur = sym
    while cur >= FIRST_VARIABLE:
        rule = slp.rules[cur - FIRST_VARIABLE]
        if entries[rule.second].info.nl:
            cur = rule.second
        else:
            suffix_parts.append(rule.second)
            cur = rule.first
    base = b"" if cur == 0x0A else bytes([cur])
    return base + b"".join(
        expand_symbol(slp, part) for part in reversed(suffix_parts)
    )


def report_matching_lines(slp: Slp, fsa: Fsa, sink, prune: bool = True) -> int:
    """Write exactly the matching lines to the sink, each newline-terminated.

    Returns the number of emitted lines, which equals the counting result.
    The final line gains a terminating newline even if the source text lacks
    one.
    """
    violations = validate_slp(slp)
    if violations:
        raise InvalidGrammarError("; ".join(violations))
    if fsa.matches_empty:
        return _report_every_line(slp, sink)

    engine = GrammarSearch(fsa)
    for rule in slp.rules:
        engine.feed_rule(rule.first, rule.second)
    entries = engine.entries

    initials = fsa.initials
    finals = fsa.finals
    # Per-byte successor maps make the per-byte stepping a dict lookup.
    step: list[dict] = [{} for _ in range(256)]
    for src, byte, targets in fsa.iter_transitions():
        if targets:
            step[byte][src] = targets

    emitted = 0
    buffer = bytearray()
    pending: int | None = None  # symbol whose trailing line fragment we skipped
    reachable: set[int] = set()
    matched = False
    rules = slp.rules

    def emit_line() -> None:
        nonlocal emitted
        head = b"" if pending is None else _tail_after_last_newline(slp, entries, pending)
        sink.write(head + bytes(buffer) + b"\n")
        emitted += 1

    stack = list(reversed(slp.axiom))
    while stack:
        sym = stack.pop()
        if sym < FIRST_VARIABLE:
            if sym == 0x0A:
                if matched:
                    emit_line()
                buffer.clear()
                pending = None
                reachable = set()
                matched = False
            else:
                buffer.append(sym)
                table = step[sym]
                moved: set[int] = set()
                for q in reachable:
                    hit = table.get(q)
                    if hit:
                        moved |= hit
                for q in initials:
                    hit = table.get(q)
                    if hit:
                        moved |= hit
                reachable = moved
                if not matched and moved & finals:
                    matched = True
            continue

        entry = entries[sym]
        info = entry.info
        if (
            prune
            and not matched
            and info.nl
            and info.count == 0
            and not info.left
            and not info.right
            and not any(
                q in reachable and target in finals for q, target in entry.edges
            )
        ):
            # Nothing of this subtree can sit in a matching line; skip it.
            buffer.clear()
            pending = sym
            reachable = {target for q, target in entry.edges if q in initials}
            matched = False
            continue
        rule = rules[sym - FIRST_VARIABLE]
        stack.append(rule.second)
        stack.append(rule.first)

    if matched:
        emit_line()
    return emitted
