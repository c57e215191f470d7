"""Synthetic emission generators for tests, benchmarks and demos.

Emissions imitate a peaky CTC acoustic model: each character occupies a few
frames dominated by its token, separated by blank frames. Noise comes from
per-frame Gaussian logit jitter and from whole-character confusions, where a
look-alike letter wins the frames but the true letter keeps a sizeable share.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alphabet import Alphabet, EmissionMatrix

BLANK = "<blank>"
DEFAULT_WORDS = ("pes", "les", "ves", "kos", "kočka", "koťka", "myš", "mys", "dům", "dub")
# first-order word transitions; each word has two likely successors
_SUCCESSORS = {
    "pes": ("les", "dům"),
    "les": ("ves", "kočka"),
    "ves": ("kos", "myš"),
    "kos": ("dub", "pes"),
    "kočka": ("myš", "les"),
    "koťka": ("dub", "kos"),
    "myš": ("dům", "ves"),
    "mys": ("pes", "koťka"),
    "dům": ("dub", "kočka"),
    "dub": ("pes", "mys"),
}


def make_alphabet(symbols) -> Alphabet:
    """Alphabet with blank at 0, the space delimiter at 1, then ``symbols``."""
    return Alphabet((BLANK, " ") + tuple(symbols), blank_index=0, delimiter_index=1)


def sample_sentences(n: int, rng: np.random.Generator, words=DEFAULT_WORDS, min_len=2, max_len=6):
    """Sentences from a sparse word-bigram chain over ``words``."""
    words = tuple(words)
    successors = _SUCCESSORS if words == DEFAULT_WORDS else None
    out = []
    for _ in range(n):
        length = int(rng.integers(min_len, max_len + 1))
        w = words[int(rng.integers(len(words)))]
        sent = [w]
        for _ in range(length - 1):
            if successors is not None and rng.random() < 0.9:
                nxt = successors[w]
                w = nxt[int(rng.integers(len(nxt)))]
            else:
                w = words[int(rng.integers(len(words)))]
            sent.append(w)
        out.append(" ".join(sent))
    return out


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    m = logits.max(axis=1, keepdims=True)
    z = logits - m
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def render_emissions(
    text: str,
    alphabet: Alphabet,
    rng: np.random.Generator,
    confusions: dict | None = None,
    confusion_rate: float = 0.0,
    jitter: float = 1.0,
    peak: float = 8.0,
    min_frames: int = 1,
    max_frames: int = 3,
) -> EmissionMatrix:
    """Frame-level log-probabilities for ``text`` (characters must be in ``alphabet``)."""
    index = {tok: i for i, tok in enumerate(alphabet.tokens)}
    V = len(alphabet)
    blank = alphabet.blank_index
    frames: list[tuple[int, int | None]] = []  # (winner, runner-up)
    frames += [(blank, None)] * int(rng.integers(1, 3))
    for ch in text:
        tok = index[ch]
        winner, runner = tok, None
        options = (confusions or {}).get(ch)
        if options and rng.random() < confusion_rate:
            winner = index[options[int(rng.integers(len(options)))]]
            runner = tok
        frames += [(winner, runner)] * int(rng.integers(min_frames, max_frames + 1))
        frames += [(blank, None)] * int(rng.integers(0, 2))
    frames += [(blank, None)] * int(rng.integers(1, 3))

    logits = rng.normal(0.0, jitter, size=(len(frames), V))
    for t, (winner, runner) in enumerate(frames):
        logits[t, winner] += peak
        if runner is not None:
            logits[t, runner] += peak - 0.7
    return EmissionMatrix(_log_softmax(logits), normalized=True)


@dataclass
class SyntheticTask:
    alphabet: Alphabet
    emissions: list
    references: list
    lm_corpus: list


def make_synthetic_task(
    n_utterances: int = 200,
    n_lm_sentences: int = 2000,
    confusion_rate: float = 0.25,
    seed: int = 0,
) -> SyntheticTask:
    """Ten-word recognition task where an in-domain LM can fix confusions.

    Confusable letter pairs turn true words into non-words or into other
    vocabulary words, so best-path decoding makes word errors that word-level
    fusion can undo.
    """
    rng = np.random.default_rng(seed)
    letters = sorted({ch for w in DEFAULT_WORDS for ch in w} | set("bvtz"))
    alphabet = make_alphabet(letters)
    confusions = {"p": "bv", "l": "v", "v": "lb", "k": "t", "č": "ť", "ť": "č", "š": "s", "s": "šz", "m": "n", "d": "t", "ů": "u", "u": "ů", "y": "i"}
    confusions = {k: tuple(c for c in v if c in letters) for k, v in confusions.items() if k in letters}
    refs = sample_sentences(n_utterances, rng)
    emissions = [render_emissions(r, alphabet, rng, confusions, confusion_rate) for r in refs]
    lm_corpus = sample_sentences(n_lm_sentences, rng)
    return SyntheticTask(alphabet, emissions, refs, lm_corpus)


def make_benchmark_utterance(
    n_frames: int = 1000,
    n_tokens: int = 40,
    seed: int = 0,
    n_lm_sentences: int = 2000,
):
    """One long utterance over a ``n_tokens`` alphabet plus an LM corpus.

    Returns ``(alphabet, emissions, reference, lm_corpus)``; emissions are
    cropped or padded with blank frames to exactly ``n_frames``.
    """
    rng = np.random.default_rng(seed)
    symbols = [chr(ord("a") + i) if i < 26 else chr(0x100 + i) for i in range(n_tokens - 2)]
    alphabet = make_alphabet(symbols)
    vocab = ["".join(rng.choice(symbols, size=int(rng.integers(3, 8)))) for _ in range(300)]
    def sentence(k):
        return " ".join(vocab[int(i)] for i in rng.integers(0, len(vocab), size=k))
    reference = sentence(n_frames // 12)
    confusions = {s: (symbols[(i + 1) % len(symbols)],) for i, s in enumerate(symbols)}
    em = render_emissions(reference, alphabet, rng, confusions, confusion_rate=0.1)
    values = em.values
    if values.shape[0] >= n_frames:
        values = values[:n_frames]
    else:
        pad = np.full((n_frames - values.shape[0], len(alphabet)), -30.0, dtype=np.float32)
        pad[:, alphabet.blank_index] = 0.0
        values = np.vstack([values, pad])
    lm_corpus = [sentence(int(rng.integers(3, 12))) for _ in range(n_lm_sentences)]
    return alphabet, EmissionMatrix(values), reference, lm_corpus
