"""Interpolated modified Kneser-Ney estimation into a backoff model.

Adjusted counts follow the usual KenLM convention: the highest order keeps
raw counts, lower orders use continuation counts (number of distinct left
extensions), except n-grams starting with ``<s>`` which keep raw counts.
Adjusted counts and count-of-counts come from the unpruned tables; pruning
only decides which n-grams survive. Each context's backoff weight is its
interpolation weight computed over the surviving extensions, so every
conditional distribution sums to one by construction.
"""
from __future__ import annotations

import math
import warnings
from collections import Counter, defaultdict

from ..exceptions import DegenerateCounts, DegenerateCountsWarning
from .counting import BOS, EOS, MARKERS, UNK, NGramCounts
from .model import BOS_LOGPROB, NGramModel

DEFAULT_UNK_FLOOR = 1e-7
FALLBACK_DISCOUNT = 0.75


def adjusted_counts(full: NGramCounts, order: int) -> list[Counter]:
    """Kneser-Ney adjusted counts for orders 1..order of the unpruned counts."""
    adjusted = []
    for n in range(1, order + 1):
        raw = full.tables[n - 1]
        if n == order:
            adjusted.append(Counter(raw))
            continue
        continuation = Counter(g[1:] for g in full.tables[n])
        adj = Counter()
        for g, c in raw.items():
            adj[g] = c if g[0] == BOS else continuation.get(g, 0)
        adjusted.append(adj)
    return adjusted


def discounts(adjusted: Counter, fallback: float = FALLBACK_DISCOUNT) -> tuple:
    """Modified KN discounts (D1, D2, D3+) from count-of-counts.

    Falls back to a flat absolute discount when some count-of-count is zero
    or a discount leaves its valid range, as happens on toy corpora.
    """
    coc = Counter(c for g, c in adjusted.items() if c > 0 and g != (BOS,))
    t1, t2, t3, t4 = (coc.get(k, 0) for k in (1, 2, 3, 4))
    if min(t1, t2, t3, t4) == 0:
        return (fallback,) * 3
    y = t1 / (t1 + 2.0 * t2)
    d = (1 - 2 * y * t2 / t1, 2 - 3 * y * t3 / t2, 3 - 4 * y * t4 / t3)
    if not all(0 < dk < k for k, dk in zip((1, 2, 3), d)):
        return (fallback,) * 3
    return d


def _discount(count: int, d: tuple) -> float:
    if count <= 0:
        return 0.0
    return min(d[min(count, 3) - 1], float(count))


def estimate(
    counts: NGramCounts,
    unk_floor: float = DEFAULT_UNK_FLOOR,
    fallback_discount: float = FALLBACK_DISCOUNT,
) -> NGramModel:
    """Build an interpolated modified Kneser-Ney backoff model from counts.

    ``<unk>`` receives the discounted mass of pruned-away unigrams; when no
    unigram was pruned its probability is pinned to ``unk_floor`` and the other
    unigrams are rescaled to compensate.
    """
    if counts.is_empty() or not counts.tables[0]:
        raise DegenerateCounts("cannot estimate a model from empty counts")
    if not 0 < unk_floor < 1:
        raise ValueError("unk_floor must be in (0, 1)")

    order = counts.order
    while order > 1 and not counts.tables[order - 1]:
        order -= 1
    if order < counts.order:
        warnings.warn(
            f"no {order + 1}-grams survived; model order reduced from {counts.order} to {order}",
            DegenerateCountsWarning,
            stacklevel=2,
        )

    full = counts.unpruned()
    adjusted = adjusted_counts(full, order)
    disc = [discounts(adjusted[n], fallback_discount) for n in range(order)]

    surviving = counts.tables[0]
    vocab_words = sorted({g[0] for g in surviving} - MARKERS - {UNK})
    vocabulary = [EOS, BOS, UNK] + vocab_words
    index = {w: i for i, w in enumerate(vocabulary)}

    # unigrams
    adj1 = adjusted[0]
    pruned_mass = sum(
        c for g, c in adj1.items() if g not in surviving and g[0] not in MARKERS
    ) + adj1.get((UNK,), 0)
    uni_counts = {w: adj1.get((w,), 0) for w in [EOS] + vocab_words}
    uni_counts[UNK] = pruned_mass
    total = sum(uni_counts.values())
    if total <= 0:
        raise DegenerateCounts("unigram adjusted counts sum to zero")
    gamma = sum(_discount(c, disc[0]) for c in uni_counts.values()) / total
    uniform = gamma / len(uni_counts)
    probs = {w: (c - _discount(c, disc[0])) / total + uniform for w, c in uni_counts.items()}
    if pruned_mass == 0:
        scale = (1.0 - unk_floor) / (1.0 - probs[UNK])
        probs = {w: p * scale for w, p in probs.items()}
        probs[UNK] = unk_floor

    entries = [dict() for _ in range(order)]
    entries[0] = {(index[w],): (math.log10(p), 0.0) for w, p in probs.items()}
    entries[0][(index[BOS],)] = (BOS_LOGPROB, 0.0)
    model = NGramModel(order, vocabulary, entries)

    for n in range(2, order + 1):
        adj = adjusted[n - 1]
        by_context = defaultdict(list)
        for g in counts.tables[n - 1]:
            by_context[g[:-1]].append(g)
        lower = model.entries[n - 2]
        new_entries = {}
        for ctx, grams in by_context.items():
            ctx_ids = tuple(index[w] for w in ctx)
            a = [adj.get(g, 0) for g in grams]
            denom = float(sum(a))
            if denom <= 0:
                continue
            dsum = [_discount(c, disc[n - 1]) for c in a]
            weight = sum(dsum) / denom
            for g, c, dc in zip(grams, a, dsum):
                wid = index[g[-1]]
                p_lower = 10.0 ** model.score_ids(wid, ctx_ids[1:])
                p = (c - dc) / denom + weight * p_lower
                new_entries[ctx_ids + (wid,)] = (math.log10(p), 0.0)
            logp, _ = lower[ctx_ids]
            lower[ctx_ids] = (logp, math.log10(weight) if weight > 0 else 0.0)
        model.entries[n - 1] = new_entries
    return model
