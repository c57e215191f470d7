"""CTC prefix beam search with word-level n-gram shallow fusion.

Prefixes live in a trie so that extending a hypothesis is O(1); each node
carries the LM state implied by its prefix. Hypotheses are ranked by

    fused = logaddexp(logp_blank, logp_nonblank)
            + alpha * ln(10) * lm_log10_sum + beta * completed_words

where the LM is queried once per word, when the delimiter closing it is
emitted and, for the last partial word, at end of input. Without an LM the
ranking is the acoustic prefix probability alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..alphabet import Alphabet
from ..exceptions import EmptyBeam
from ..lm.estimator import as_model
from ..textnorm import NormalizedTranscript
from ..validation import check_emissions, check_positive_int

LN10 = math.log(10.0)
NEG_INF = float("-inf")


def logaddexp(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == NEG_INF:
        return a
    return a + math.log1p(math.exp(b - a))


@dataclass(frozen=True)
class DecoderConfig:
    """Beam search settings.

    ``alpha`` scales the log10 LM score (converted to natural log), ``beta``
    is added per completed word; both only apply when ``lm`` is set.
    ``token_min_logp`` skips tokens below that per-frame log-probability.
    """

    beam_width: int = 100
    alpha: float = 0.5
    beta: float = 1.5
    token_min_logp: float = -5.0
    lm: object = None
    nbest: int = 1

    def __post_init__(self):
        check_positive_int(self.beam_width, "beam_width")
        check_positive_int(self.nbest, "nbest")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.token_min_logp <= 0:
            raise ValueError(f"token_min_logp must be <= 0, got {self.token_min_logp}")
        object.__setattr__(self, "lm", as_model(self.lm))


@dataclass(frozen=True)
class BeamHypothesis:
    labels: tuple
    logp_blank: float
    logp_nonblank: float
    lm_state: tuple
    completed_words: int
    lm_score: float
    fused_score: float
    words: tuple = ()

    @property
    def acoustic_score(self) -> float:
        return logaddexp(self.logp_blank, self.logp_nonblank)

    @property
    def text(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class DecodeResult:
    transcript: NormalizedTranscript
    score: float
    labels: tuple = ()
    nbest: tuple = field(default=(), repr=False)

    @property
    def text(self) -> str:
        return " ".join(self.transcript.words)


class _PrefixTrie:
    """Append-only prefix tree; node 0 is the empty prefix."""

    def __init__(self, alphabet: Alphabet, config: DecoderConfig):
        self.alphabet = alphabet
        self.V = len(alphabet)
        self.delimiter = alphabet.delimiter_index
        self.lm = config.lm
        self.alpha_ln = config.alpha * LN10
        self.beta = config.beta
        self.parent = [-1]
        self.token = [-1]
        self.partial = [""]  # characters of the word being spelled
        self.lm_state = [self._initial_state()]
        self.lm_sum = [0.0]
        self.n_words = [0]
        self.fusion = [0.0]
        self.children: dict[int, int] = {}
        self._lm_cache: dict = {}

    def _initial_state(self) -> tuple:
        lm = self.lm
        if lm is None or lm.order == 1:
            return ()
        return (lm.bos_id,)

    def word_logprob(self, state: tuple, word: str) -> tuple[float, tuple]:
        key = (state, word)
        hit = self._lm_cache.get(key)
        if hit is None:
            lm = self.lm
            wid = lm.word_id(word)
            logp = lm.score_ids(wid, state)
            new_state = (state + (wid,))[-(lm.order - 1) :] if lm.order > 1 else ()
            hit = self._lm_cache[key] = (logp, new_state)
        return hit

    def child(self, node: int, tok: int) -> int:
        key = node * self.V + tok
        c = self.children.get(key)
        if c is not None:
            return c
        c = len(self.parent)
        self.children[key] = c
        self.parent.append(node)
        self.token.append(tok)
        if tok == self.delimiter:
            word = self.partial[node]
            self.partial.append("")
            if word and self.lm is not None:
                logp, state = self.word_logprob(self.lm_state[node], word)
                self.lm_state.append(state)
                self.lm_sum.append(self.lm_sum[node] + logp)
                self.n_words.append(self.n_words[node] + 1)
                self.fusion.append(self.fusion[node] + self.alpha_ln * logp + self.beta)
            else:
                self._inherit(node)
        else:
            self.partial.append(self.partial[node] + self.alphabet.tokens[tok])
            self._inherit(node)
        return c

    def _inherit(self, node: int) -> None:
        self.lm_state.append(self.lm_state[node])
        self.lm_sum.append(self.lm_sum[node])
        self.n_words.append(self.n_words[node])
        self.fusion.append(self.fusion[node])

    def labels(self, node: int) -> tuple:
        out = []
        while node > 0:
            out.append(self.token[node])
            node = self.parent[node]
        return tuple(reversed(out))

    def finish(self, node: int, pb: float, pnb: float) -> BeamHypothesis:
        """Close the trailing partial word and build the public hypothesis."""
        lm_sum, n_words, state = self.lm_sum[node], self.n_words[node], self.lm_state[node]
        fused = logaddexp(pb, pnb) + self.fusion[node]
        word = self.partial[node]
        if word and self.lm is not None:
            logp, state = self.word_logprob(state, word)
            lm_sum += logp
            n_words += 1
            fused += self.alpha_ln * logp + self.beta
        labels = self.labels(node)
        return BeamHypothesis(
            labels=labels,
            logp_blank=pb,
            logp_nonblank=pnb,
            lm_state=tuple(self.lm.vocabulary[i] for i in state if i is not None) if self.lm else (),
            completed_words=n_words,
            lm_score=lm_sum,
            fused_score=fused,
            words=tuple(self.alphabet.labels_to_words(labels)),
        )


def _select(scored: list, width: int, trie: _PrefixTrie) -> list:
    """Top ``width`` of (score, node) pairs; exact ties go to the smaller label sequence."""
    if len(scored) <= width:
        return scored
    scored.sort(key=lambda s: -s[0])
    cutoff = scored[width - 1][0]
    if scored[width][0] != cutoff:
        return scored[:width]
    head = [s for s in scored if s[0] > cutoff]
    tied = sorted((s for s in scored if s[0] == cutoff), key=lambda s: trie.labels(s[1]))
    return head + tied[: width - len(head)]


def beam_search(emissions, alphabet: Alphabet, config: Optional[DecoderConfig] = None) -> list[BeamHypothesis]:
    """Run prefix beam search and return the final beam, best first."""
    config = config or DecoderConfig()
    x = check_emissions(emissions, alphabet)
    T = x.shape[0]
    blank = alphabet.blank_index
    width = config.beam_width
    floor = config.token_min_logp
    trie = _PrefixTrie(alphabet, config)
    fusion = trie.fusion
    last_token = trie.token

    beams = {0: (0.0, NEG_INF)}
    for t in range(T):
        row = x[t]
        active = np.flatnonzero((row >= floor) & (row > NEG_INF)).tolist()
        if not active:
            raise EmptyBeam(f"frame {t}: every token is below token_min_logp={floor}")
        values = row.tolist()
        blank_lp = values[blank] if blank in active else None
        tokens = [(c, values[c]) for c in active if c != blank]

        next_b: dict[int, float] = {}
        next_nb: dict[int, float] = {}
        for node, (pb, pnb) in beams.items():
            total = logaddexp(pb, pnb)
            if blank_lp is not None:
                v = total + blank_lp
                prev = next_b.get(node)
                next_b[node] = v if prev is None else logaddexp(prev, v)
            last = last_token[node]
            for c, lp in tokens:
                child = trie.child(node, c)
                if c == last:
                    if pnb != NEG_INF:
                        v = pnb + lp
                        prev = next_nb.get(node)
                        next_nb[node] = v if prev is None else logaddexp(prev, v)
                    if pb == NEG_INF:
                        continue
                    v = pb + lp
                else:
                    v = total + lp
                prev = next_nb.get(child)
                next_nb[child] = v if prev is None else logaddexp(prev, v)

        scored = []
        for node in set(next_b) | set(next_nb):
            pb = next_b.get(node, NEG_INF)
            pnb = next_nb.get(node, NEG_INF)
            acoustic = logaddexp(pb, pnb)
            if acoustic == NEG_INF:
                continue
            scored.append((acoustic + fusion[node], node))
        if not scored:
            raise EmptyBeam(f"frame {t}: no hypothesis has non-zero probability")
        # the set iteration above is hash-ordered; sort nodes for run-to-run stability
        scored.sort(key=lambda s: s[1])
        kept = _select(scored, width, trie)
        beams = {node: (next_b.get(node, NEG_INF), next_nb.get(node, NEG_INF)) for _, node in kept}

    final = [trie.finish(node, pb, pnb) for node, (pb, pnb) in beams.items()]
    final.sort(key=lambda h: (-h.fused_score, h.labels))
    return final


def beam_search_decode(emissions, alphabet: Alphabet, config: Optional[DecoderConfig] = None) -> DecodeResult:
    config = config or DecoderConfig()
    hyps = beam_search(emissions, alphabet, config)
    best = hyps[0]
    return DecodeResult(
        transcript=NormalizedTranscript(best.words),
        score=best.fused_score,
        labels=best.labels,
        nbest=tuple(hyps[: config.nbest]),
    )
