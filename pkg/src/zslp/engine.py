"""Counting regex-matching lines directly on the compressed grammar.

The engine keeps one table entry per symbol: a counting tuple plus the list
of automaton transitions the symbol labels after saturation. A transition
(q1, X, q2) exists exactly when the automaton can move from q1 to q2 reading
a factor of X's expansion that is a prefix (unless q2 is final), a suffix
(unless q1 is initial), the whole expansion, or any inner factor when q1 is
initial and q2 is final. Rules are processed in definition order, one pass;
two scratch structures give O(1) operations per step:

* a last-writer matrix keyed by state pair, stamped with the id of the rule
  that produced a transition (never cleared; staleness is detected by
  comparing the stamp with the current rule id), and
* per-state successor rows for the rule's right child, reloaded each rule
  and invalidated by writing a single sentinel per previously touched row.

Successor rows hold only transitions that leave non-initial states; the
right child's initial-state successors are kept in a separate list, which is
what keeps every row at most one state wide on deterministic automata.

The engine requires automata with no transitions entering an initial state
or leaving a final state, the shape the pattern compiler produces. Without
it, saturated transitions could stand for non-contiguous fragments of the
expansion and boundary matches would be over-reported.

The axiom is folded left to right without materialising transitions for the
intermediate prefixes: only the set of states reachable from an initial
state by reading some suffix of the prefix expanded so far is carried over,
together with the running counting tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .automaton import Fsa
from .slp import InvalidGrammarError, Slp, validate_slp

_NO_WRITER = -1  # last-writer sentinel; no symbol id is negative
_ROW_END = -1  # successor-row terminator; states are non-negative

PERCENTILE_POINTS = (50, 75, 95, 98, 100)


@dataclass(frozen=True)
class CountInfo:
    """Per-symbol counting tuple for the symbol's expansion u.

    nl     -- u contains a newline
    left   -- the first line of u contains a match
    right  -- the last line of u contains a match
    count  -- number of closed lines of u (newline on both sides) that match
    """

    nl: bool
    left: bool
    right: bool
    count: int

    def __post_init__(self):
        if not self.nl:
            assert self.left == self.right, "single-line tuple must have left == right"
            assert self.count == 0, "closed lines require a newline"

    def as_tuple(self) -> tuple[bool, bool, bool, int]:
        return (self.nl, self.left, self.right, self.count)


def count_combine(ca: CountInfo, cb: CountInfo, new_match: bool) -> CountInfo:
    """Counting tuple of a concatenation from its parts.

    ``new_match`` reports a match that crosses the boundary between the two
    expansions; it closes the seam line when both sides contain a newline.
    """
    nl = ca.nl or cb.nl
    left = (ca.left or cb.left or new_match) if not ca.nl else ca.left
    right = (ca.right or cb.right or new_match) if not cb.nl else cb.right
    count = ca.count + cb.count
    if ca.nl and cb.nl and (ca.right or cb.left or new_match):
        count += 1
    return CountInfo(nl, left, right, count)


@dataclass
class SymbolEntry:
    info: CountInfo
    edges: list


@dataclass(frozen=True)
class SearchStats:
    """Operation-count instrumentation for one counting run."""

    s: int
    p: int
    axiom_len: int
    per_rule: tuple
    per_axiom_symbol: tuple
    rule_percentiles: dict
    axiom_percentiles: dict
    measured_ops: int

    @property
    def op_budget(self) -> int:
        return sum(self.per_rule) + sum(self.per_axiom_symbol) + self.p + self.axiom_len


def nearest_rank_percentiles(values, points=PERCENTILE_POINTS) -> dict:
    """Nearest-rank percentiles of a sequence; empty sequences report 0."""
    ordered = sorted(values)
    result = {}
    for point in points:
        if not ordered:
            result[point] = 0
        else:
            rank = max(1, ceil(point / 100 * len(ordered)))
            result[point] = ordered[rank - 1]
    return result


def init_terminals(fsa: Fsa) -> list:
    """Build the 256 terminal entries straight from the automaton."""
    initials = fsa.initials
    finals = fsa.finals
    entries = []
    for byte in range(256):
        edges = list(fsa.pairs_on(byte))
        hit = any(q in initials and t in finals for q, t in edges)
        entries.append(
            SymbolEntry(CountInfo(byte == 0x0A, hit, hit, 0), edges)
        )
    return entries


class GrammarSearch:
    """One counting run over a streamed grammar.

    Feed rules in definition order with ``feed_rule``, then close with
    ``finish_axiom``. The instance owns its scratch structures and must not
    be shared across threads; the Fsa and any Slp stay untouched.
    """

    def __init__(self, fsa: Fsa, debug: bool = False):
        for src, _, targets in fsa.iter_transitions():
            if src in fsa.finals and targets:
                raise ValueError("automaton has transitions leaving a final state")
            if targets & fsa.initials:
                raise ValueError("automaton has transitions entering an initial state")
        self.fsa = fsa
        self.debug = debug
        self.s = fsa.state_count
        self._initials = fsa.initials
        self._finals = fsa.finals
        self._initial_list = sorted(fsa.initials)
        self.entries: list[SymbolEntry] = init_terminals(fsa)
        self._last_writer = [[_NO_WRITER] * self.s for _ in range(self.s)]
        self._rows = [[_ROW_END] * (self.s + 1) for _ in range(self.s)]
        self._row_len = [0] * self.s
        self._touched: list[int] = []
        self.per_rule: list[int] = []
        self.per_axiom_symbol: list[int] = []
        self.measured_ops = 0
        self.final_info: CountInfo | None = None
        self.fold_trace: list[CountInfo] = []
        self.max_row_width = 0

    def feed_rule(self, first: int, second: int) -> None:
        """Process one rule, appending the entry for its left-hand variable."""
        entries = self.entries
        left_id = len(entries)
        if not 0 <= first < left_id or not 0 <= second < left_id:
            raise InvalidGrammarError(
                f"rule for symbol {left_id} references undefined/later symbol"
            )
        ops = 0
        initials = self._initials
        finals = self._finals
        rows = self._rows
        row_len = self._row_len

        # Invalidate rows left over from the previous rule: one sentinel each.
        for q in self._touched:
            rows[q][0] = _ROW_END
            row_len[q] = 0
            ops += 1
        self._touched.clear()

        # Load the right child's transitions; initial-state sources go to
        # side lists (they only matter for the implicit initial pairs).
        beta_edges = entries[second].edges
        s_beta = len(beta_edges)
        initial_successors: dict[int, list[int]] = {}
        touched = self._touched
        for q, target in beta_edges:
            ops += 1
            if q in initials:
                initial_successors.setdefault(q, []).append(target)
            else:
                fill = row_len[q]
                if fill == 0:
                    touched.append(q)
                rows[q][fill] = target
                row_len[q] = fill + 1
        for q in touched:
            rows[q][row_len[q]] = _ROW_END
            ops += 1
        if self.debug and self.fsa.is_deterministic:
            for q in touched:
                assert row_len[q] <= 1, (
                    f"deterministic automaton produced a {row_len[q]}-wide row"
                )
        if touched:
            self.max_row_width = max(
                self.max_row_width, max(row_len[q] for q in touched)
            )

        last_writer = self._last_writer
        new_edges: list[tuple[int, int]] = []
        new_match = False
        op_count = s_beta + self.s

        for q1, mid in entries[first].edges:
            ops += 1
            row = rows[mid]
            width = row_len[mid]
            op_count += 1 + width
            q1_is_initial = q1 in initials
            mid_is_middle = mid not in initials and mid not in finals
            writer_row = last_writer[q1]
            for k in range(width):
                q2 = row[k]
                ops += 1
                if writer_row[q2] != left_id:
                    writer_row[q2] = left_id
                    new_edges.append((q1, q2))
                if q1_is_initial and mid_is_middle and q2 in finals:
                    new_match = True
            if mid in finals:
                ops += 1
                if writer_row[mid] != left_id:
                    writer_row[mid] = left_id
                    new_edges.append((q1, mid))

        # Implicit pairs (q, q) for initial q: the match may start inside the
        # right child's expansion with the left child contributing nothing.
        for q in self._initial_list:
            ops += 1
            writer_row = last_writer[q]
            for q2 in initial_successors.get(q, ()):
                ops += 1
                if writer_row[q2] != left_id:
                    writer_row[q2] = left_id
                    new_edges.append((q, q2))

        info = count_combine(entries[first].info, entries[second].info, new_match)
        if self.debug:
            assert len(set(new_edges)) == len(new_edges), "duplicate saturated edge"
        entries.append(SymbolEntry(info, new_edges))
        self.per_rule.append(op_count)
        self.measured_ops += ops

    def _fold_axiom(self, axiom, early_exit: bool = False):
        """Left fold over the axiom; yields nothing, sets final state.

        Returns (info, reached) where ``reached`` is the set of states an
        initial state can reach by reading a suffix of the expansion so far
        (final states, once entered, are retained). With ``early_exit`` the
        fold stops as soon as a final state is reached.
        """
        entries = self.entries
        initials = self._initials
        finals = self._finals
        first_entry = entries[axiom[0]]
        self.per_axiom_symbol.append(len(first_entry.edges))
        ops = 1
        reached = set()
        for q, target in first_entry.edges:
            ops += 1
            if q in initials:
                reached.add(target)
        info = first_entry.info
        if self.debug:
            self.fold_trace.append(info)
        self.measured_ops += ops
        if early_exit and reached & finals:
            return info, reached
        for sym in axiom[1:]:
            entry = entries[sym]
            self.per_axiom_symbol.append(len(entry.edges))
            ops = 1
            new_match = False
            next_reached = set()
            for q, target in entry.edges:
                ops += 1
                if q in reached:
                    next_reached.add(target)
                    if (
                        not new_match
                        and q not in initials
                        and q not in finals
                        and target in finals
                    ):
                        new_match = True
                elif q in initials:
                    next_reached.add(target)
            for q in reached & finals:
                next_reached.add(q)
                ops += 1
            reached = next_reached
            info = count_combine(info, entry.info, new_match)
            if self.debug:
                self.fold_trace.append(info)
            self.measured_ops += ops
            if early_exit and reached & finals:
                return info, reached
        return info, reached

    def finish_axiom(self, axiom) -> int:
        """Fold the axiom and return the number of matching lines."""
        if not axiom:
            raise InvalidGrammarError("empty axiom")
        info, _ = self._fold_axiom(axiom)
        self.final_info = info
        return info.count + ((info.left + info.right) if info.nl else info.left)


def _line_count_arithmetic(rule_pairs, read_axiom) -> int:
    """Number of lines in the expansion, from newline counts alone.

    Lines are newline-separated segments; a trailing newline does not open a
    final empty line, while adjacent newlines do enclose empty lines.
    """
    newline_counts = [1 if byte == 0x0A else 0 for byte in range(256)]
    ends_with_newline = [byte == 0x0A for byte in range(256)]
    for first, second in rule_pairs:
        newline_counts.append(newline_counts[first] + newline_counts[second])
        ends_with_newline.append(ends_with_newline[second])
    axiom = read_axiom()
    total = sum(newline_counts[sym] for sym in axiom)
    return total + (0 if ends_with_newline[axiom[-1]] else 1)


def run_count(rule_pairs, read_axiom, fsa: Fsa, debug: bool = False) -> int:
    """Streaming form of ``count_matching_lines``.

    ``rule_pairs`` is consumed one rule at a time; ``read_axiom`` is a
    zero-argument callable invoked only after the last rule, so a caller can
    hand over a decoder that produces both from a single pass over a stream.
    """
    if fsa.matches_empty:
        # Every line matches; count lines without touching the automaton.
        return _line_count_arithmetic(rule_pairs, read_axiom)
    engine = GrammarSearch(fsa, debug=debug)
    for first, second in rule_pairs:
        engine.feed_rule(first, second)
    return engine.finish_axiom(read_axiom())


def count_matching_lines(slp: Slp, fsa: Fsa, debug: bool = False) -> int:
    """Number of lines of the expansion containing a match, without expanding."""
    violations = validate_slp(slp)
    if violations:
        raise InvalidGrammarError("; ".join(violations))
    return run_count(
        ((rule.first, rule.second) for rule in slp.rules),
        lambda: slp.axiom,
        fsa,
        debug=debug,
    )


def contains_match(slp: Slp, fsa: Fsa) -> bool:
    """Whether any line of the expansion contains a match.

    Every rule is still read (later rules may define axiom symbols), but the
    axiom fold stops as soon as a match is certain.
    """
    violations = validate_slp(slp)
    if violations:
        raise InvalidGrammarError("; ".join(violations))
    if fsa.matches_empty:
        return True
    engine = GrammarSearch(fsa)
    for rule in slp.rules:
        engine.feed_rule(rule.first, rule.second)
    _, reached = engine._fold_axiom(slp.axiom, early_exit=True)
    return bool(reached & fsa.finals)


def collect_stats(slp: Slp, fsa: Fsa, debug: bool = False) -> SearchStats:
    """Run a count and report the per-rule and per-axiom operation counts."""
    violations = validate_slp(slp)
    if violations:
        raise InvalidGrammarError("; ".join(violations))
    engine = GrammarSearch(fsa, debug=debug)
    for rule in slp.rules:
        engine.feed_rule(rule.first, rule.second)
    engine.finish_axiom(slp.axiom)
    s = fsa.state_count
    rule_bound = s**3 + s
    axiom_bound = s**2
    for value in engine.per_rule:
        assert value <= rule_bound, f"per-rule operations {value} exceed {rule_bound}"
    for value in engine.per_axiom_symbol:
        assert value <= axiom_bound, (
            f"per-axiom-symbol operations {value} exceed {axiom_bound}"
        )
    return SearchStats(
        s=s,
        p=len(slp.rules),
        axiom_len=len(slp.axiom),
        per_rule=tuple(engine.per_rule),
        per_axiom_symbol=tuple(engine.per_axiom_symbol),
        rule_percentiles=nearest_rank_percentiles(engine.per_rule),
        axiom_percentiles=nearest_rank_percentiles(engine.per_axiom_symbol),
        measured_ops=engine.measured_ops,
    )
