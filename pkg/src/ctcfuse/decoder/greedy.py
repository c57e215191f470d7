"""Best-path CTC decoding."""
from __future__ import annotations

import numpy as np

from ..alphabet import Alphabet
from ..textnorm import NormalizedTranscript
from ..validation import check_emissions


def collapse(path, blank_index: int) -> tuple:
    """CTC collapse: merge consecutive repeats, then drop blanks."""
    out = []
    prev = None
    for tok in path:
        if tok != prev and tok != blank_index:
            out.append(int(tok))
        prev = tok
    return tuple(out)


def greedy_labels(emissions, alphabet: Alphabet) -> tuple[tuple, float]:
    """Collapsed argmax path and its log-probability.

    Ties resolve to the lowest token index.
    """
    x = check_emissions(emissions, alphabet)
    if x.shape[0] == 0:
        return (), 0.0
    path = np.argmax(x, axis=1)
    score = float(x[np.arange(x.shape[0]), path].sum())
    return collapse(path.tolist(), alphabet.blank_index), score


def greedy_decode(emissions, alphabet: Alphabet) -> NormalizedTranscript:
    labels, _ = greedy_labels(emissions, alphabet)
    return NormalizedTranscript(alphabet.labels_to_words(labels))
