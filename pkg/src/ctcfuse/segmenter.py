"""Pause-based slicing of long utterances.

Pauses come from an external VAD or aligner as points in time (silence
midpoints). Each utterance is cut greedily: from the current segment start,
jump to the farthest pause that keeps the segment within ``max_len``, or to
the utterance end when it is reachable. Farthest-reach greedy is optimal for
interval covering, so the number of cuts is minimal. An utterance with a
pause-free stretch longer than ``max_len`` cannot be cut and is discarded.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import DuplicateId

DEFAULT_MAX_LEN = 30.0


@dataclass(frozen=True)
class Utterance:
    id: str
    duration: float
    pauses: tuple = ()

    def __post_init__(self):
        pauses = tuple(float(p) for p in self.pauses)
        object.__setattr__(self, "pauses", pauses)
        if not self.duration > 0:
            raise ValueError(f"utterance {self.id!r}: duration must be positive")
        prev = 0.0
        for p in pauses:
            if not prev < p < self.duration:
                raise ValueError(
                    f"utterance {self.id!r}: pauses must be strictly increasing inside (0, duration)"
                )
            prev = p

    @classmethod
    def from_silences(cls, id, duration, silences: Iterable[tuple[float, float]]) -> "Utterance":
        """Build from (start, end) silence intervals, keeping their midpoints."""
        mids = sorted({(s + e) / 2.0 for s, e in silences})
        return cls(id, duration, tuple(m for m in mids if 0 < m < duration))


@dataclass(frozen=True)
class Segment:
    utterance_id: str
    start: float
    end: float

    @property
    def duration(self) -> float:
        return self.end - self.start


class Discarded:
    """Marker returned by :func:`slice_utterance` for unsliceable input."""

    def __init__(self, utterance_id: str, longest_gap: float):
        self.utterance_id = utterance_id
        self.longest_gap = longest_gap

    def __repr__(self):
        return f"Discarded({self.utterance_id!r}, longest_gap={self.longest_gap})"

    def __bool__(self):
        return False


def slice_utterance(u: Utterance, max_len: float = DEFAULT_MAX_LEN):
    """Return a list of segments tiling ``u``, or a :class:`Discarded` marker."""
    if not max_len > 0:
        raise ValueError("max_len must be positive")
    points = (0.0,) + u.pauses + (float(u.duration),)
    longest = max(b - a for a, b in zip(points, points[1:]))
    if longest > max_len:
        return Discarded(u.id, longest)

    segments = []
    start = 0.0
    i = 0  # index into points of the current start
    last = len(points) - 1
    while i < last:
        j = i + 1
        while j < last and points[j + 1] - start <= max_len:
            j += 1
        end = points[j]
        segments.append(Segment(u.id, start, end))
        start, i = end, j

    for seg in segments:
        if seg.end - seg.start > max_len:
            raise AssertionError(f"segment {seg} exceeds max_len {max_len}")
    return segments


def slice_corpus(utterances: Sequence[Utterance], max_len: float = DEFAULT_MAX_LEN):
    """Slice every utterance; returns ``(segments, discarded_ids)`` in input order."""
    seen = set()
    for u in utterances:
        if u.id in seen:
            raise DuplicateId(f"duplicate utterance id {u.id!r}")
        seen.add(u.id)
    segments, discarded = [], []
    for u in utterances:
        result = slice_utterance(u, max_len)
        if isinstance(result, Discarded):
            discarded.append(u.id)
        else:
            segments.extend(result)
    return segments, discarded


def segment_ids(segments: Sequence[Segment]) -> list[str]:
    """Stable ids of the form ``<utterance_id>-<nnnn>``."""
    counters: dict[str, int] = {}
    ids = []
    for seg in segments:
        k = counters.get(seg.utterance_id, 0)
        counters[seg.utterance_id] = k + 1
        ids.append(f"{seg.utterance_id}-{k:04d}")
    return ids


def read_utterance_manifest(path) -> list[Utterance]:
    """Parse a JSON Lines manifest of ``{"id", "duration", "pauses"}`` objects.

    Objects may carry ``silences`` (list of [start, end]) instead of ``pauses``.
    Errors name the offending line.
    """
    utterances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if "pauses" in obj or "silences" not in obj:
                    u = Utterance(str(obj["id"]), float(obj["duration"]), tuple(obj.get("pauses", ())))
                else:
                    u = Utterance.from_silences(str(obj["id"]), float(obj["duration"]), obj["silences"])
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: {type(exc).__name__}: {exc}") from exc
            utterances.append(u)
    return utterances


def write_segment_manifest(segments: Sequence[Segment], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sid, seg in zip(segment_ids(segments), segments):
            record = {"id": sid, "utterance_id": seg.utterance_id, "start": seg.start, "end": seg.end}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


class PauseSlicer(TransformerMixin, BaseEstimator):
    """Transformer from utterances to segments of at most ``max_len`` seconds.

    Ids of utterances that could not be sliced are stored in
    ``discarded_ids_`` after each :meth:`transform` call.
    """

    def __init__(self, max_len=DEFAULT_MAX_LEN):
        self.max_len = max_len

    def fit(self, X=None, y=None):
        if not self.max_len > 0:
            raise ValueError("max_len must be positive")
        return self

    def transform(self, X: Sequence[Utterance]) -> list[Segment]:
        segments, self.discarded_ids_ = slice_corpus(list(X), self.max_len)
        return segments
