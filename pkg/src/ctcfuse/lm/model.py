"""Backoff n-gram model storage and querying (ARPA semantics, log10)."""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from .counting import BOS, EOS, UNK, sentence_words

BOS_LOGPROB = -99.0
# log10 probability used for OOV words when a model has no <unk> entry
MISSING_UNK_LOGPROB = -100.0


class NGramModel:
    """Immutable backoff language model.

    Words are interned to integer ids; ``entries[n - 1]`` maps id n-tuples to
    ``(log10_prob, log10_backoff)``. Safe to query from many threads.
    """

    def __init__(self, order: int, vocabulary: Sequence[str], entries: Sequence[dict]):
        self.order = order
        self.vocabulary = tuple(vocabulary)
        self.index = {w: i for i, w in enumerate(self.vocabulary)}
        self.entries = [dict(e) for e in entries]
        if len(self.entries) != order:
            raise ValueError(f"expected {order} entry tables, got {len(self.entries)}")
        self.unk_id = self.index.get(UNK)
        self.bos_id = self.index.get(BOS)
        self.eos_id = self.index.get(EOS)

    def __repr__(self):
        sizes = ", ".join(str(len(e)) for e in self.entries)
        return f"NGramModel(order={self.order}, entries=[{sizes}])"

    def __getstate__(self):
        return {"order": self.order, "vocabulary": self.vocabulary, "entries": self.entries}

    def __setstate__(self, state):
        self.__init__(state["order"], state["vocabulary"], state["entries"])

    @property
    def vocabulary_size(self) -> int:
        return len(self.vocabulary)

    def word_id(self, word: str):
        wid = self.index.get(word)
        return self.unk_id if wid is None else wid

    def predictable_ids(self) -> list[int]:
        """Ids of every word the model can emit (all unigrams except ``<s>``)."""
        return [g[0] for g in self.entries[0] if g[0] != self.bos_id]

    def score_ids(self, wid, context: tuple) -> float:
        if wid is None:
            return MISSING_UNK_LOGPROB
        context = context[-(self.order - 1) :] if self.order > 1 else ()
        acc = 0.0
        entries = self.entries
        for i in range(len(context) + 1):
            hist = context[i:]
            hit = entries[len(hist)].get(hist + (wid,))
            if hit is not None:
                return acc + hit[0]
            if hist:
                ctx = entries[len(hist) - 1].get(hist)
                if ctx is not None:
                    acc += ctx[1]
        return MISSING_UNK_LOGPROB

    def context_ids(self, context: Iterable[str]) -> tuple:
        return tuple(self.word_id(w) for w in context)

    def score_word(self, word: str, context: Sequence[str] = ()) -> float:
        """log10 P(word | context) with backoff; unknown words map to ``<unk>``."""
        return self.score_ids(self.word_id(word), self.context_ids(context))

    def sentence_logprob(self, sentence) -> float:
        words = sentence_words(sentence)
        keep = self.order - 1
        ctx = (self.bos_id,) if keep else ()
        total = 0.0
        for w in words:
            wid = self.word_id(w)
            total += self.score_ids(wid, ctx)
            if keep:
                ctx = (ctx + (wid,))[-keep:]
        return total + self.score_ids(self.eos_id, ctx)

    def total_probability(self, context: Sequence[str] = ()) -> float:
        """Sum of P(w | context) over every predictable word; 1 for a valid model."""
        ctx = self.context_ids(context)
        return math.fsum(10.0 ** self.score_ids(w, ctx) for w in self.predictable_ids())

    def ngrams(self, n: int):
        """Yield ``(words, log10_prob, log10_backoff)`` for order ``n`` in id order."""
        vocab = self.vocabulary
        for g in sorted(self.entries[n - 1]):
            logp, bow = self.entries[n - 1][g]
            yield tuple(vocab[i] for i in g), logp, bow
