"""N-gram counting over sentence-padded word sequences, and count pruning."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..exceptions import OrderOutOfRange, OrderTooHigh
from ..textnorm import sentence_tokens as sentence_words

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
MARKERS = frozenset((BOS, EOS))
MAX_ORDER = 4


def check_order(order, allow_high_order: bool = False) -> int:
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        raise OrderOutOfRange(f"order must be a positive integer, got {order!r}")
    if order > MAX_ORDER and not allow_high_order:
        raise OrderTooHigh(f"order {order} exceeds the {MAX_ORDER}-gram cap (use allow_high_order)")
    return order


@dataclass
class NGramCounts:
    """Raw n-gram counts; ``tables[n - 1]`` maps n-tuples of words to counts.

    After :func:`prune`, ``source`` points at the unpruned counts, which the
    estimator needs for continuation counts and the ``<unk>`` mass.
    """

    order: int
    tables: list = field(default_factory=list)
    source: Optional["NGramCounts"] = None

    def __post_init__(self):
        while len(self.tables) < self.order:
            self.tables.append(Counter())

    def add_sentence(self, words) -> None:
        padded = (BOS,) + tuple(words) + (EOS,)
        for n in range(1, self.order + 1):
            table = self.tables[n - 1]
            for i in range(len(padded) - n + 1):
                table[padded[i : i + n]] += 1

    def merge(self, other: "NGramCounts") -> "NGramCounts":
        """Sum of two count sets; associative and commutative."""
        if other.order != self.order:
            raise ValueError("cannot merge counts of different orders")
        tables = [Counter(a) + Counter(b) for a, b in zip(self.tables, other.tables)]
        return NGramCounts(self.order, tables)

    def is_empty(self) -> bool:
        return not any(self.tables)

    def __getitem__(self, ngram) -> int:
        ngram = tuple(ngram)
        return self.tables[len(ngram) - 1].get(ngram, 0)

    def unpruned(self) -> "NGramCounts":
        return self.source if self.source is not None else self


def count_ngrams(corpus: Iterable, order: int, allow_high_order: bool = False) -> NGramCounts:
    """Count every n-gram (n <= order) of each ``<s> w1 .. wk </s>`` sentence."""
    counts = NGramCounts(check_order(order, allow_high_order))
    for sentence in corpus:
        counts.add_sentence(sentence_words(sentence))
    return counts


@dataclass(frozen=True)
class PruneThresholds:
    """Minimum raw counts for unigrams and for n-grams of order >= 2."""

    unigram_min: int = 10
    higher_order_min: int = 100

    def __post_init__(self):
        if self.unigram_min < 1 or self.higher_order_min < 1:
            raise ValueError("prune thresholds must be >= 1")


def prune(counts: NGramCounts, thresholds: PruneThresholds) -> NGramCounts:
    """Drop rare n-grams by raw count, keeping the result prefix-closed.

    Sentence markers are never pruned. An n-gram is also dropped when its
    prefix was dropped or when it contains a dropped word.
    """
    unigrams = counts.tables[0]
    dropped_words = {
        g[0] for g, c in unigrams.items() if c < thresholds.unigram_min and g[0] not in MARKERS
    }
    tables = [Counter({g: c for g, c in unigrams.items() if g[0] not in dropped_words})]
    for n in range(2, counts.order + 1):
        prev = tables[-1]
        kept = Counter()
        for g, c in counts.tables[n - 1].items():
            if c < thresholds.higher_order_min or g[:-1] not in prev:
                continue
            if dropped_words and any(w in dropped_words for w in g):
                continue
            kept[g] = c
        tables.append(kept)
    return NGramCounts(counts.order, tables, source=counts.unpruned())
