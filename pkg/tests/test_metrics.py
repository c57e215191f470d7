import functools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ctcfuse import WerReport, aggregate, evaluate_corpus, wer
from ctcfuse.exceptions import EmptyList, EmptyReference, IdMismatch
from ctcfuse.metrics import format_percent

words = st.lists(st.sampled_from("abcd"), max_size=8)


def edit_distance(r, h):
    @functools.lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (r[i - 1] != h[j - 1]))

    return d(len(r), len(h))


def test_identity():
    rep = wer("a b c", "a b c")
    assert rep.wer == 0 and rep.hits == 3


def test_sub_and_delete():
    rep = wer("a b c d", "a x c")
    assert (rep.substitutions, rep.deletions, rep.insertions) == (1, 1, 0)
    assert rep.wer == 0.5


def test_insertion():
    rep = wer("a", "a b")
    assert rep.insertions == 1 and rep.wer == 1.0


def test_wer_above_one():
    assert wer("a", "b c d").wer == 3.0


def test_tie_prefers_fewer_substitutions():
    rep = wer("a b", "b a")
    assert (rep.substitutions, rep.insertions, rep.deletions) == (0, 1, 1)


def test_empty_reference():
    with pytest.raises(EmptyReference):
        wer("", "a")
    assert wer("", "").wer == 0.0


@settings(max_examples=500, deadline=None)
@given(words, words)
def test_matches_recursive_oracle(r, h):
    rep = wer(r, h) if r or not h else None
    if rep is None:
        return
    assert rep.errors == edit_distance(tuple(r), tuple(h))
    assert rep.hits + rep.substitutions + rep.deletions == len(r)
    assert rep.errors <= max(len(r), len(h))


@settings(max_examples=300, deadline=None)
@given(words.filter(bool), words.filter(bool))
def test_swap_symmetry(r, h):
    a, b = wer(r, h), wer(h, r)
    assert a.errors == b.errors


def test_accepts_transcript_types():
    from ctcfuse import normalize

    assert wer(normalize("Hello, World!"), ["hello", "world"]).wer == 0


def test_aggregate_sums():
    reps = [WerReport(substitutions=5, hits=95), WerReport(deletions=15, hits=85)]
    assert aggregate(reps).wer == pytest.approx(0.10)


def test_aggregate_discriminating():
    reps = [WerReport(hits=10), WerReport(substitutions=10, hits=80)]
    assert aggregate(reps).wer == pytest.approx(0.10)
    mean = sum(r.wer for r in reps) / 2
    assert mean == pytest.approx(0.0556, abs=1e-4)


def test_aggregate_single_and_empty():
    r = WerReport(1, 2, 3, 4)
    assert aggregate([r]) == r
    with pytest.raises(EmptyList):
        aggregate([])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 20)] * 4), min_size=1, max_size=8), st.randoms())
def test_aggregate_order_independent(fields, rnd):
    reps = [WerReport(*f) for f in fields]
    shuffled = reps[:]
    rnd.shuffle(shuffled)
    assert aggregate(reps) == aggregate(shuffled)
    k = len(reps) // 2
    if 0 < k < len(reps):
        assert aggregate([aggregate(reps[:k]), aggregate(reps[k:])]) == aggregate(reps)


def test_evaluate_corpus():
    refs = {"u1": "a b", "u2": "c d e"}
    per_id, total = evaluate_corpus(refs, {"u2": "c d e", "u1": "a b"})
    assert list(per_id) == ["u1", "u2"] and total.wer == 0
    per_id, total = evaluate_corpus(refs, {"u1": "a", "u2": "c x e"})
    assert total == aggregate(per_id.values())
    assert total.wer == pytest.approx(2 / 5)


def test_evaluate_corpus_mismatch():
    with pytest.raises(IdMismatch):
        evaluate_corpus({"u1": "a", "u2": "b"}, {"u1": "a"})
    with pytest.raises(EmptyList):
        evaluate_corpus({}, {})


def test_report_dict_and_format():
    rep = wer("a b c d", "a x c")
    assert rep.as_dict()["ref_words"] == 4
    assert format_percent(rep.wer) == "50.00%"
    assert format_percent(0.0545) == "5.45%"
