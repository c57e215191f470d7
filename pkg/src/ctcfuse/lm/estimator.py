"""Scikit-learn style wrapper around counting, pruning and estimation."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .arpa import read_arpa, write_arpa
from .counting import MAX_ORDER, PruneThresholds, check_order, count_ngrams, prune, sentence_words
from .kneser_ney import DEFAULT_UNK_FLOOR, estimate
from .model import NGramModel


class NGramLM(BaseEstimator):
    """Count-pruned interpolated Kneser-Ney word n-gram model.

    Parameters
    ----------
    order : int, default=4
        Maximum n-gram order. Orders above 4 need ``allow_high_order=True``.
    prune_unigram : int, default=10
        Unigrams seen fewer times are dropped (their mass goes to ``<unk>``).
    prune_higher : int, default=100
        N-grams of order >= 2 seen fewer times are dropped.
    unk_floor : float, default=1e-7
        ``<unk>`` probability when nothing was pruned.

    Attributes
    ----------
    counts_ : NGramCounts
        Pruned counts.
    model_ : NGramModel
    """

    def __init__(
        self,
        order=MAX_ORDER,
        prune_unigram=10,
        prune_higher=100,
        unk_floor=DEFAULT_UNK_FLOOR,
        allow_high_order=False,
    ):
        self.order = order
        self.prune_unigram = prune_unigram
        self.prune_higher = prune_higher
        self.unk_floor = unk_floor
        self.allow_high_order = allow_high_order

    def fit(self, X, y=None):
        """Train on an iterable of sentences (strings, word lists or transcripts)."""
        check_order(self.order, self.allow_high_order)
        thresholds = PruneThresholds(self.prune_unigram, self.prune_higher)
        raw = count_ngrams(X, self.order, allow_high_order=self.allow_high_order)
        self.counts_ = prune(raw, thresholds)
        self.model_ = estimate(self.counts_, unk_floor=self.unk_floor)
        self.vocabulary_size_ = self.model_.vocabulary_size
        return self

    @classmethod
    def from_arpa(cls, path, allow_high_order=False) -> "NGramLM":
        model = read_arpa(path, allow_high_order=allow_high_order)
        lm = cls(order=model.order, allow_high_order=allow_high_order)
        lm.model_ = model
        lm.vocabulary_size_ = model.vocabulary_size
        return lm

    def write_arpa(self, path) -> None:
        check_is_fitted(self, "model_")
        write_arpa(self.model_, path)

    def score_samples(self, X) -> np.ndarray:
        """log10 probability of each sentence, ``</s>`` included."""
        check_is_fitted(self, "model_")
        return np.array([self.model_.sentence_logprob(s) for s in X], dtype=np.float64)

    def score(self, X, y=None) -> float:
        return float(self.score_samples(X).sum())

    def perplexity(self, X) -> float:
        check_is_fitted(self, "model_")
        sentences = list(X)
        logprob = self.score_samples(sentences).sum()
        n_tokens = sum(len(sentence_words(s)) + 1 for s in sentences)
        return float(10.0 ** (-logprob / n_tokens))


def as_model(lm) -> NGramModel | None:
    """Accept an NGramModel, a fitted NGramLM, or None."""
    if lm is None or isinstance(lm, NGramModel):
        return lm
    if isinstance(lm, NGramLM):
        check_is_fitted(lm, "model_")
        return lm.model_
    raise TypeError(f"expected NGramModel or NGramLM, got {type(lm).__name__}")
