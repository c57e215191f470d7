"""Word error rate with deterministic S/I/D splits and corpus aggregation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exceptions import EmptyList, EmptyReference, IdMismatch
from .textnorm import NormalizedTranscript, sentence_tokens


@dataclass(frozen=True)
class WerReport:
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    hits: int = 0

    @property
    def ref_words(self) -> int:
        return self.hits + self.substitutions + self.deletions

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def wer(self) -> float:
        if self.ref_words == 0:
            if self.errors:
                raise EmptyReference("WER is undefined for an empty reference with insertions")
            return 0.0
        return self.errors / self.ref_words

    def __add__(self, other: "WerReport") -> "WerReport":
        return WerReport(
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            self.hits + other.hits,
        )

    def as_dict(self) -> dict:
        return {
            "substitutions": self.substitutions,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "hits": self.hits,
            "ref_words": self.ref_words,
            "wer": self.wer,
        }


def wer(ref, hyp) -> WerReport:
    """Minimum edit distance alignment of two word sequences.

    Among alignments with the fewest errors, the one with the fewest
    substitutions wins, then the fewest insertions. The DP minimizes the
    cost vector (errors, substitutions, insertions) lexicographically, which
    is exact because the order is preserved under addition.
    """
    r = sentence_tokens(ref)
    h = sentence_tokens(hyp)
    if not r and h:
        raise EmptyReference("reference is empty but hypothesis is not")
    n, m = len(r), len(h)
    # cell = (errors, substitutions, insertions)
    prev = [(j, 0, j) for j in range(m + 1)]
    for i in range(1, n + 1):
        cur = [(i, 0, 0)]
        ri = r[i - 1]
        for j in range(1, m + 1):
            e, s, ins = prev[j - 1]
            diag = (e, s, ins) if ri == h[j - 1] else (e + 1, s + 1, ins)
            e, s, ins = prev[j]
            delete = (e + 1, s, ins)
            e, s, ins = cur[j - 1]
            insert = (e + 1, s, ins + 1)
            cur.append(min(diag, delete, insert))
        prev = cur
    errors, subs, ins = prev[m]
    dels = errors - subs - ins
    return WerReport(subs, ins, dels, n - subs - dels)


def aggregate(reports: Sequence[WerReport]) -> WerReport:
    """Corpus total: errors and reference words are summed before dividing."""
    reports = list(reports)
    if not reports:
        raise EmptyList("cannot aggregate an empty list of reports")
    total = reports[0]
    for rep in reports[1:]:
        total = total + rep
    return total


def evaluate_corpus(refs: Mapping[str, object], hyps: Mapping[str, object]):
    """Score id-keyed references against hypotheses.

    Returns ``(per_id, total)`` where ``per_id`` is ordered by the reference
    ids' order.
    """
    missing = [k for k in refs if k not in hyps]
    extra = [k for k in hyps if k not in refs]
    if missing or extra:
        raise IdMismatch(
            f"ids differ: {len(missing)} without hypothesis (e.g. {missing[:3]}), "
            f"{len(extra)} without reference (e.g. {extra[:3]})"
        )
    if not refs:
        raise EmptyList("empty corpus")
    per_id = {k: wer(refs[k], hyps[k]) for k in refs}
    return per_id, aggregate(per_id.values())


def format_percent(ratio: float) -> str:
    return f"{100.0 * ratio:.2f}%"
