"""Transcript normalization for LM training and WER scoring.

Pipeline per transcript: user replacement table (regexes, file order), removal
of bracketed non-speech markers, lowercasing, punctuation to whitespace, then
whitespace splitting.
"""
from __future__ import annotations

import csv
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

QUOTE_MARKS = frozenset("\"'`´„“”‚‘’«»‹›")
HYPHENS = frozenset("-‐‑")
DEFAULT_NONSPEECH = ("[...]", "<...>")


def is_default_punctuation(ch: str) -> bool:
    return ch in QUOTE_MARKS or unicodedata.category(ch).startswith("P")


def _parse_marker(pattern: str) -> tuple[str, str]:
    if pattern.count("...") != 1:
        raise ValueError(f"non-speech pattern {pattern!r} must look like OPEN...CLOSE")
    open_, close = pattern.split("...")
    if not open_ or not close:
        raise ValueError(f"non-speech pattern {pattern!r} has an empty delimiter")
    return open_, close


@dataclass(frozen=True)
class NormalizationConfig:
    """Normalization rules.

    ``punctuation_set=None`` means every Unicode punctuation character plus
    common quotation marks. Letters with diacritics are never punctuation.
    Output is always a word list, so runs of whitespace always collapse;
    ``collapse_whitespace`` is accepted for config files that set it.
    """

    punctuation_set: Optional[frozenset] = None
    nonspeech_patterns: tuple = DEFAULT_NONSPEECH
    lowercase: bool = True
    collapse_whitespace: bool = True
    split_hyphens: bool = True
    replacements: tuple = ()
    _markers: tuple = field(init=False, repr=False, compare=False)
    _replacements: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.punctuation_set is not None:
            object.__setattr__(self, "punctuation_set", frozenset(self.punctuation_set))
        object.__setattr__(self, "nonspeech_patterns", tuple(self.nonspeech_patterns))
        markers = []
        for pattern in self.nonspeech_patterns:
            open_, close = _parse_marker(pattern)
            markers.append(re.compile(re.escape(open_) + ".*?" + re.escape(close), re.S))
        object.__setattr__(self, "_markers", tuple(markers))
        reps = tuple((str(p), str(r)) for p, r in self.replacements)
        object.__setattr__(self, "replacements", reps)
        object.__setattr__(self, "_replacements", tuple((re.compile(p), r) for p, r in reps))

    def is_punctuation(self, ch: str) -> bool:
        if not self.split_hyphens and ch in HYPHENS:
            return False
        if self.punctuation_set is None:
            return is_default_punctuation(ch)
        return ch in self.punctuation_set


@dataclass(frozen=True)
class NormalizedTranscript:
    words: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __str__(self):
        return render(self)


DEFAULT_CONFIG = NormalizationConfig()


def load_replacements(path) -> tuple:
    """Read a two-column TSV (regex pattern, replacement); order is kept."""
    table = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
            if not row or (len(row) == 1 and not row[0]):
                continue
            if row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(row)}")
            try:
                re.compile(row[0])
            except re.error as exc:
                raise ValueError(f"{path}:{lineno}: bad pattern {row[0]!r}: {exc}") from exc
            table.append((row[0], row[1]))
    return tuple(table)


def normalize(text: str, config: NormalizationConfig = DEFAULT_CONFIG) -> NormalizedTranscript:
    for pattern, replacement in config._replacements:
        text = pattern.sub(replacement, text)
    for marker in config._markers:
        text = marker.sub(" ", text)
    if config.lowercase:
        text = text.lower()
    text = "".join(" " if config.is_punctuation(ch) else ch for ch in text)
    words = text.split()
    if not config.split_hyphens:
        words = [w.strip("".join(HYPHENS)) for w in words]
        words = [w for w in words if w]
    return NormalizedTranscript(words)


def sentence_tokens(sentence) -> tuple:
    """Words of an already-normalized sentence given in any supported form."""
    if isinstance(sentence, NormalizedTranscript):
        return sentence.words
    if isinstance(sentence, str):
        return tuple(sentence.split())
    return tuple(sentence)


def render(t) -> str:
    words = t.words if isinstance(t, NormalizedTranscript) else t
    return " ".join(words)


class TranscriptNormalizer(TransformerMixin, BaseEstimator):
    """Stateless transformer mapping raw strings to normalized word lists.

    Parameters mirror :class:`NormalizationConfig`; ``replacements`` is a
    sequence of (regex, replacement) pairs, for example from
    :func:`load_replacements`.
    """

    def __init__(
        self,
        punctuation_set=None,
        nonspeech_patterns=DEFAULT_NONSPEECH,
        lowercase=True,
        split_hyphens=True,
        replacements=(),
    ):
        self.punctuation_set = punctuation_set
        self.nonspeech_patterns = nonspeech_patterns
        self.lowercase = lowercase
        self.split_hyphens = split_hyphens
        self.replacements = replacements

    def _config(self) -> NormalizationConfig:
        return NormalizationConfig(
            punctuation_set=self.punctuation_set,
            nonspeech_patterns=tuple(self.nonspeech_patterns),
            lowercase=self.lowercase,
            split_hyphens=self.split_hyphens,
            replacements=tuple(self.replacements),
        )

    def fit(self, X=None, y=None):
        self.config_ = self._config()
        return self

    def transform(self, X: Iterable[str]) -> list[NormalizedTranscript]:
        config = getattr(self, "config_", None) or self._config()
        if isinstance(X, str):
            raise TypeError("expected an iterable of strings, got a single string")
        return [normalize(text, config) for text in X]

    def inverse_transform(self, X: Sequence[NormalizedTranscript]) -> list[str]:
        return [render(t) for t in X]
