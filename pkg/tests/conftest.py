"""Shared fixtures and randomised-input helpers for the test suite."""

import random
import re

import pytest

from zslp.automaton import (
    NewlinePatternError,
    PatternSyntaxError,
    compile_pattern,
)
from zslp.slp import Slp


# Grammar deriving "ba\nab\naba" with subtrees "ba\na" and "b\naba":
# X1->b,a  X2->\n,a  X3->X1,X2  X4->b,\n  X5->a,b  X6->X5,a  X7->X4,X6
EXAMPLE_PAIRS = [
    (98, 97),
    (10, 97),
    (256, 257),
    (98, 10),
    (97, 98),
    (260, 97),
    (259, 261),
]
EXAMPLE_AXIOM = [258, 262]
EXAMPLE_TEXT = b"ba\nab\naba"


@pytest.fixture
def example_slp() -> Slp:
    return Slp.from_pairs(EXAMPLE_PAIRS, EXAMPLE_AXIOM)


@pytest.fixture
def ab_ba_fsa():
    return compile_pattern("ab|ba")


def random_pattern(rng: random.Random, depth: int = 3, alphabet: str = "ab") -> str:
    """A random pattern from the supported dialect."""
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        pick = rng.random()
        if pick < 0.7:
            return rng.choice(alphabet)
        if pick < 0.8:
            return "."
        if pick < 0.9:
            return "[" + "".join(sorted(set(rng.choice(alphabet) for _ in range(2)))) + "]"
        return "[^" + rng.choice(alphabet) + "]"
    if roll < 0.55:
        return random_pattern(rng, depth - 1, alphabet) + random_pattern(
            rng, depth - 1, alphabet
        )
    if roll < 0.7:
        return (
            "("
            + random_pattern(rng, depth - 1, alphabet)
            + "|"
            + random_pattern(rng, depth - 1, alphabet)
            + ")"
        )
    if roll < 0.85:
        return "(" + random_pattern(rng, depth - 1, alphabet) + ")" + rng.choice("*+?")
    low = rng.randrange(0, 3)
    high = low + rng.randrange(0, 3)
    return "(" + random_pattern(rng, depth - 1, alphabet) + ")" + f"{{{low},{high}}}"


def compiled_random_pattern(rng, depth=3, alphabet="ab", max_states=None):
    """Keep drawing until a pattern compiles (and fits the state bound)."""
    while True:
        pattern = random_pattern(rng, depth, alphabet)
        try:
            fsa = compile_pattern(pattern)
        except (NewlinePatternError, PatternSyntaxError):
            continue
        if max_states is not None and not 0 < fsa.state_count <= max_states:
            continue
        return pattern, fsa


def sample_from_pattern(rng: random.Random, pattern: str) -> bytes:
    """A random member of the pattern's language (may contain newlines)."""
    from zslp.automaton import Branch, ByteSet, Repeat, Seq, parse_pattern

    def walk(node) -> bytes:
        if isinstance(node, ByteSet):
            if not node.bytes_:
                return b""
            return bytes([rng.choice(sorted(node.bytes_))])
        if isinstance(node, Seq):
            return b"".join(walk(part) for part in node.parts)
        if isinstance(node, Branch):
            return walk(rng.choice(node.options))
        if isinstance(node, Repeat):
            reps = node.low
            bound = node.high if node.high is not None else node.low + 3
            while reps < bound and rng.random() < 0.4:
                reps += 1
            return b"".join(walk(node.item) for _ in range(reps))
        raise TypeError(node)

    return walk(parse_pattern(pattern))


def random_text(
    rng: random.Random,
    max_len: int,
    alphabet: bytes = b"ab\n",
    seeds: list | None = None,
) -> bytes:
    """Random text over the alphabet, optionally splicing in seed strings."""
    n = rng.randrange(1, max_len + 1)
    body = bytearray(rng.choice(alphabet) for _ in range(n))
    for seed in seeds or ():
        if not seed:
            continue
        pos = rng.randrange(0, len(body) + 1)
        body[pos:pos] = seed
    return bytes(body)


def random_grammar(
    rng: random.Random,
    max_rules: int = 30,
    expansion_cap: int = 120,
    terminals: tuple = (97, 98, 10),
) -> Slp:
    """A random valid grammar with bounded expansion lengths."""
    lengths = {t: 1 for t in terminals}
    pairs = []
    symbols = list(terminals)
    for _ in range(rng.randrange(0, max_rules + 1)):
        for _ in range(20):
            first, second = rng.choice(symbols), rng.choice(symbols)
            if lengths[first] + lengths[second] <= expansion_cap:
                break
        else:
            first, second = rng.choice(terminals), rng.choice(terminals)
        left = 256 + len(pairs)
        pairs.append((first, second))
        lengths[left] = lengths[first] + lengths[second]
        symbols.append(left)
    axiom = [rng.choice(symbols) for _ in range(rng.randrange(1, 6))]
    return Slp.from_pairs(pairs, axiom)


def brute_anchored_pairs(fsa, expansion: bytes) -> set:
    """Transitions a symbol with this expansion u must carry after saturation.

    (q1, q2) is included exactly when the automaton reads some factor
    u[i:j] from q1 to q2 with (i == 0 or q1 initial) and (j == len(u) or
    q2 final). The whole expansion, initial-rooted suffixes, final-ended
    prefixes, and initial-to-final inner factors are the four shapes this
    covers.
    """
    pairs = set()
    n = len(expansion)
    # prefix relation sweep: left end anchored at position 0
    rel = {(q, q) for q in range(fsa.state_count)}
    for j in range(1, n + 1):
        byte = expansion[j - 1]
        rel = {(q1, t) for (q1, q) in rel for t in fsa.successors(q, byte)}
        if j == n:
            pairs |= rel
        else:
            pairs |= {(q1, q2) for (q1, q2) in rel if q2 in fsa.finals}
    # runs rooted at an initial state, any start position
    for q0 in fsa.initials:
        reach = set()
        for j in range(1, n + 1):
            byte = expansion[j - 1]
            sources = reach | {q0}
            reach = {t for q in sources for t in fsa.successors(q, byte)}
            if j == n:
                pairs |= {(q0, t) for t in reach}
            else:
                pairs |= {(q0, t) for t in reach if t in fsa.finals}
    return pairs


def brute_count_info(fsa, expansion: bytes) -> tuple:
    """Definitional counting tuple computed on the uncompressed expansion."""
    from zslp.oracle import factor_match

    segments = expansion.split(b"\n")
    return (
        b"\n" in expansion,
        factor_match(fsa, segments[0]),
        factor_match(fsa, segments[-1]),
        sum(1 for segment in segments[1:-1] if factor_match(fsa, segment)),
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            match = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
            if match:
                number = int(match.group(1))
                outcomes[number] = outcomes.get(number, True) and status == "passed"
    if outcomes:
        terminalreporter.write_sep("-", "acceptance criteria")
        for number in sorted(outcomes):
            verdict = "PASS" if outcomes[number] else "FAIL"
            terminalreporter.write_line(f"criterion {number}: {verdict}")
