"""Exhaustive CTC posterior over label sequences, for verification.

Every one of the V**T alignments is enumerated, collapsed and its probability
added to its label sequence. Exponential; limited to T <= 10 and V <= 6.
"""
from __future__ import annotations

import itertools

import numpy as np

from ..alphabet import Alphabet
from ..exceptions import InstanceTooLarge
from ..validation import check_emissions

MAX_FRAMES = 10
MAX_TOKENS = 6
_CHUNK_FRAMES = 7


def _collapse_keys(paths: np.ndarray, blank: int, base: int) -> np.ndarray:
    """Encode each collapsed path as an integer in base ``base`` (label + 1 per digit)."""
    prev = np.concatenate([np.full((paths.shape[0], 1), -1), paths[:, :-1]], axis=1)
    keep = (paths != blank) & (paths != prev)
    rank = np.cumsum(keep, axis=1) - 1
    weight = np.where(keep, base ** np.maximum(rank, 0), 0)
    return ((paths + 1) * weight).sum(axis=1)


def _decode_key(key: int, base: int) -> tuple:
    labels = []
    while key:
        key, digit = divmod(key, base)
        labels.append(digit - 1)
    return tuple(labels)


def oracle_decode(emissions, alphabet: Alphabet) -> list[tuple[tuple, float]]:
    """Return ``[(labels, posterior), ...]`` sorted by posterior, then labels.

    Posteriors are normalized by the total alignment mass (1 for normalized
    emissions). Label sequences with zero mass are omitted.
    """
    x = check_emissions(emissions, alphabet)
    T, V = x.shape
    if T > MAX_FRAMES or V > MAX_TOKENS:
        raise InstanceTooLarge(f"oracle limited to T <= {MAX_FRAMES}, V <= {MAX_TOKENS}; got T={T}, V={V}")
    if T == 0:
        return [((), 1.0)]
    probs = np.exp(x)
    blank = alphabet.blank_index
    base = V + 1
    tail = min(T, _CHUNK_FRAMES)
    head = T - tail
    grid = np.array(list(itertools.product(range(V), repeat=tail)), dtype=np.int64)
    tail_mass = np.ones(grid.shape[0])
    for j in range(tail):
        tail_mass *= probs[head + j, grid[:, j]]

    mass: dict[int, float] = {}
    for prefix in itertools.product(range(V), repeat=head):
        prefix_mass = 1.0
        for t, tok in enumerate(prefix):
            prefix_mass *= probs[t, tok]
        if prefix_mass == 0.0:
            continue
        paths = np.concatenate([np.tile(np.array(prefix, dtype=np.int64), (grid.shape[0], 1)), grid], axis=1)
        keys = _collapse_keys(paths, blank, base)
        uniq, inverse = np.unique(keys, return_inverse=True)
        sums = np.bincount(inverse, weights=prefix_mass * tail_mass)
        for k, s in zip(uniq.tolist(), sums.tolist()):
            mass[k] = mass.get(k, 0.0) + s

    total = sum(mass.values())
    ranked = [(_decode_key(k, base), m / total) for k, m in mass.items() if m > 0.0]
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked
