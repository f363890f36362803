import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from zslp.repair import compress, compression_report
from zslp.slp import Slp, encode_slp, expand, validate_slp


def rules_of(slp: Slp):
    return [(r.first, r.second) for r in slp.rules]


def test_compress_abab():
    slp = compress(b"abab")
    assert rules_of(slp) == [(97, 98)]
    assert slp.axiom == (256, 256)


def test_compress_no_repeats():
    slp = compress(b"abc")
    assert slp.rules == ()
    assert slp.axiom == (97, 98, 99)


def test_compress_abcabc_tie_breaking():
    # "ab" and "bc" both occur twice; "ab" occurs first, so it wins.
    slp = compress(b"abcabc")
    assert rules_of(slp) == [(97, 98), (256, 99)]
    assert slp.axiom == (257, 257)


def test_compress_runs_count_nonoverlapping():
    slp = compress(b"aaaa")
    assert rules_of(slp) == [(97, 97)]
    assert slp.axiom == (256, 256)
    # "aaa" holds only one non-overlapping "aa": below the threshold.
    slp = compress(b"aaa")
    assert slp.rules == ()
    assert slp.axiom == (97, 97, 97)


def test_compress_single_byte():
    slp = compress(b"a")
    assert slp.rules == ()
    assert slp.axiom == (97,)


def test_compress_empty_rejected():
    with pytest.raises(ValueError):
        compress(b"")


def test_compress_is_deterministic():
    data = b"the cat sat on the mat; the cat sat on the hat\n" * 7
    assert compress(data) == compress(data)


def nonoverlap_pair_counts(symbols):
    """Greedy left-to-right non-overlapping pair frequencies."""
    counts = {}
    last_counted_at = {}
    for i in range(len(symbols) - 1):
        pair = (symbols[i], symbols[i + 1])
        if last_counted_at.get(pair) == i - 1:
            continue  # would overlap the occurrence just counted (equal run)
        counts[pair] = counts.get(pair, 0) + 1
        last_counted_at[pair] = i
    return counts


def test_final_axiom_has_no_frequent_pair():
    for data in (b"abab" * 9, b"mississippi river mississippi", bytes(range(50)) * 3):
        slp = compress(data)
        counts = nonoverlap_pair_counts(slp.axiom)
        assert all(c < 2 for c in counts.values()), counts


def test_replacement_shrinks_by_count():
    trace = []
    slp = compress(b"banana bandana banana bandana band", _trace=trace)
    assert trace, "expected at least one replacement"
    total_replaced = sum(count for _, count in trace)
    assert all(count >= 2 for _, count in trace)
    assert len(slp.axiom) == 34 - total_replaced


def test_rules_in_creation_order():
    slp = compress(b"abcabcXabab")
    for i, rule in enumerate(slp.rules):
        assert rule.left == 256 + i
        assert rule.first < rule.left and rule.second < rule.left


def test_report_abab():
    slp = compress(b"abab")
    report = compression_report(slp, 4)
    assert report.rules == 1
    assert report.axiom_len == 2
    assert report.ratio == 4 / len(encode_slp(slp))


def test_report_incompressible_ratio_below_one():
    slp = compress(b"abc")
    report = compression_report(slp, 3)
    assert report.rules == 0
    assert report.axiom_len == 3
    assert report.ratio < 1


def test_report_rejects_negative_length():
    with pytest.raises(ValueError):
        compression_report(compress(b"ab"), -1)


@settings(max_examples=300, deadline=None)
@given(st.binary(min_size=1, max_size=600))
@example(b"\x00\x0a\x00\x0a\x00\x0a")
@example(b"aaaaaaaaaa")
@example(b"\n\n\n\n")
def test_roundtrip_arbitrary_bytes(data):
    slp = compress(data)
    assert validate_slp(slp) == []
    assert expand(slp) == data


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="ab\n", min_size=1, max_size=200))
def test_roundtrip_line_texts(text):
    data = text.encode()
    assert expand(compress(data)) == data
