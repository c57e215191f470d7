"""Dataset statistics and fine-tuning schedule bookkeeping."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .exceptions import EmptyDataset, IdMismatch
from .segmenter import Segment
from .textnorm import sentence_tokens


@dataclass(frozen=True)
class DatasetStats:
    total_hours: float
    word_count: int
    avg_len: float
    segment_count: int

    def __add__(self, other: "DatasetStats") -> "DatasetStats":
        seconds = (self.total_hours + other.total_hours) * 3600.0
        n = self.segment_count + other.segment_count
        return DatasetStats(seconds / 3600.0, self.word_count + other.word_count, seconds / n, n)

    def as_dict(self) -> dict:
        return {
            "hours": self.total_hours,
            "words": self.word_count,
            "avg_len": self.avg_len,
            "segments": self.segment_count,
        }

    def table_row(self) -> dict:
        """Rounded the way dataset tables usually print: hours, thousands of words, seconds."""
        return {
            "# hours": round(self.total_hours, 1),
            "# words": round(self.word_count / 1000.0),
            "avg-len": round(self.avg_len, 1),
        }


def _duration(item) -> float:
    if isinstance(item, Segment):
        return item.end - item.start
    return float(item)


def stats(segments: Sequence, transcripts: Sequence) -> DatasetStats:
    """Hours, word count and mean segment length.

    ``segments`` holds :class:`Segment` objects or plain durations in
    seconds, aligned with ``transcripts``.
    """
    if len(segments) != len(transcripts):
        raise IdMismatch(f"{len(segments)} segments but {len(transcripts)} transcripts")
    if not segments:
        raise EmptyDataset("no segments")
    seconds = math.fsum(_duration(s) for s in segments)
    words = sum(len(sentence_tokens(t)) for t in transcripts)
    return DatasetStats(seconds / 3600.0, words, seconds / len(segments), len(segments))


def stats_by_id(durations: Mapping[str, float], transcripts: Mapping[str, object]) -> DatasetStats:
    if set(durations) != set(transcripts):
        only_a = sorted(set(durations) - set(transcripts))[:3]
        only_b = sorted(set(transcripts) - set(durations))[:3]
        raise IdMismatch(f"manifest/transcript ids differ: {only_a} vs {only_b}")
    ids = list(durations)
    return stats([durations[i] for i in ids], [transcripts[i] for i in ids])


def read_durations(path) -> dict[str, float]:
    """Durations from a segment manifest (``start``/``end``) or utterance manifest (``duration``)."""
    out: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                key = str(obj["id"])
                if "duration" in obj:
                    dur = float(obj["duration"])
                else:
                    dur = float(obj["end"]) - float(obj["start"])
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: {type(exc).__name__}: {exc}") from exc
            if key in out:
                raise ValueError(f"{path}:{lineno}: duplicate id {key!r}")
            out[key] = dur
    return out


@dataclass(frozen=True)
class ScheduleSpec:
    """Fine-tuning schedule relative to a default run.

    Scaling the batch size or the number of updates by k both multiply the
    number of passes over the data by k.
    """

    base_epochs: int = 5
    batch_multiplier: int = 1
    update_multiplier: int = 1

    def __post_init__(self):
        for name in ("base_epochs", "batch_multiplier", "update_multiplier"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")


def effective_epochs(spec: ScheduleSpec) -> int:
    return spec.base_epochs * spec.batch_multiplier * spec.update_multiplier


def schedule_label(spec: ScheduleSpec) -> str:
    """Row label such as ``"20 epochs (2xBS, 2xUP)"`` or ``"5 epochs (default)"``."""
    parts = []
    if spec.batch_multiplier > 1:
        parts.append(f"{spec.batch_multiplier}xBS")
    if spec.update_multiplier > 1:
        parts.append(f"{spec.update_multiplier}xUP")
    return f"{effective_epochs(spec)} epochs ({', '.join(parts) or 'default'})"
