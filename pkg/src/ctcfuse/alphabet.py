"""Grapheme alphabet and the binary emission-matrix file format.

Emission file layout (all little-endian)::

    offset  size   field
    0       8      magic, ASCII ``CTCEMIT1``
    8       4      u32 T, number of frames
    12      4      u32 V, number of tokens (must equal the alphabet size)
    16      1      u8 normalized flag (1 if every row log-sum-exps to 0)
    17      8      f64 frame duration in seconds (metadata only)
    25      4*T*V  f32 natural-log probabilities, frame-major

Negative infinity is stored as the most negative finite float32
(``-3.4028235e38``) and mapped back to ``-inf`` on load.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .exceptions import (
    AlphabetError,
    BadMagic,
    DimensionMismatch,
    EmissionFormatError,
    InvalidEmissionValue,
    NonFiniteValue,
    TruncatedFile,
)

MAGIC = b"CTCEMIT1"
HEADER = struct.Struct("<8sIIBd")
NEG_INF_SENTINEL = np.float32(np.finfo(np.float32).min)
NORMALIZATION_TOL = 1e-4


@dataclass(frozen=True)
class Alphabet:
    """Ordered grapheme inventory of a CTC model.

    ``delimiter_index`` may be ``None`` for character-level toy alphabets that
    have no word boundary token; everything is then one word.
    """

    tokens: tuple
    blank_index: int = 0
    delimiter_index: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        n = len(self.tokens)
        if n < 2:
            raise AlphabetError("alphabet needs a blank and at least one other token")
        if len(set(self.tokens)) != n:
            raise AlphabetError("alphabet tokens must be distinct")
        if not 0 <= self.blank_index < n:
            raise AlphabetError(f"blank_index {self.blank_index} out of range")
        if self.delimiter_index is not None:
            if not 0 <= self.delimiter_index < n:
                raise AlphabetError(f"delimiter_index {self.delimiter_index} out of range")
            if self.delimiter_index == self.blank_index:
                raise AlphabetError("blank and delimiter must be different tokens")

    def __len__(self):
        return len(self.tokens)

    def render_token(self, index: int) -> str:
        if index == self.blank_index:
            return ""
        if index == self.delimiter_index:
            return " "
        return self.tokens[index]

    def labels_to_words(self, labels: Sequence[int]) -> list[str]:
        """Split a collapsed label sequence into words at the delimiter."""
        words, current = [], []
        for idx in labels:
            if idx == self.blank_index:
                continue
            if idx == self.delimiter_index:
                if current:
                    words.append("".join(current))
                    current = []
            else:
                current.append(self.tokens[idx])
        if current:
            words.append("".join(current))
        return words

    @classmethod
    def from_json(cls, path) -> "Alphabet":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise AlphabetError(f"{path}: invalid JSON: {exc}") from exc
        try:
            return cls(
                tokens=obj["tokens"],
                blank_index=int(obj["blank_index"]),
                delimiter_index=obj.get("delimiter_index"),
            )
        except (KeyError, TypeError) as exc:
            raise AlphabetError(f"{path}: missing or bad field {exc}") from exc

    def to_json(self, path) -> None:
        payload = {
            "tokens": list(self.tokens),
            "blank_index": self.blank_index,
            "delimiter_index": self.delimiter_index,
        }
        Path(path).write_text(json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8")


def _rows_normalized(values: np.ndarray) -> bool:
    if values.shape[0] == 0:
        return True
    v = values.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = v.max(axis=1, keepdims=True)
        lse = m[:, 0] + np.log(np.exp(v - m).sum(axis=1))
    return bool(np.all(np.abs(lse) <= NORMALIZATION_TOL))


def _check_values(values: np.ndarray) -> None:
    if np.isnan(values).any() or np.isposinf(values).any():
        raise NonFiniteValue("emission values must be finite or -inf")
    if (values > 0).any():
        raise InvalidEmissionValue("emission log-probabilities must be <= 0")


@dataclass(frozen=True, eq=False)
class EmissionMatrix:
    """T x V frame-level natural-log probabilities, stored as float32."""

    values: np.ndarray
    normalized: bool = False
    frame_duration: float = 0.02
    vocab: int = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise DimensionMismatch(f"emissions must be 2-D, got shape {values.shape}")
        values = np.ascontiguousarray(values, dtype=np.float32)
        values.setflags(write=False)
        _check_values(values)
        if self.normalized and not _rows_normalized(values):
            raise InvalidEmissionValue("matrix flagged normalized but a row does not log-sum-exp to 0")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vocab", values.shape[1])

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, EmissionMatrix):
            return NotImplemented
        return (
            self.normalized == other.normalized
            and self.frame_duration == other.frame_duration
            and self.values.shape == other.values.shape
            and self.values.tobytes() == other.values.tobytes()
        )

    __hash__ = None


def save_emissions(matrix: EmissionMatrix, path) -> None:
    """Write ``matrix`` in the binary emission format.

    A matrix flagged ``normalized`` whose rows no longer log-sum-exp to zero
    is written unchanged with the flag cleared.
    """
    values = matrix.values
    normalized = matrix.normalized and _rows_normalized(values)
    T, V = values.shape
    body = np.where(np.isneginf(values), NEG_INF_SENTINEL, values).astype("<f4")
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, T, V, int(normalized), float(matrix.frame_duration)))
        fh.write(body.tobytes(order="C"))


def load_emissions(path, alphabet: Optional[Alphabet] = None) -> EmissionMatrix:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < len(MAGIC) or raw[: len(MAGIC)] != MAGIC:
        raise BadMagic(f"{path}: missing CTCEMIT1 header")
    if len(raw) < HEADER.size:
        raise TruncatedFile(f"{path}: header is {len(raw)} bytes, need {HEADER.size}")
    _, T, V, flag, frame_duration = HEADER.unpack_from(raw)
    if flag not in (0, 1):
        raise EmissionFormatError(f"{path}: normalized flag must be 0 or 1, got {flag}")
    if alphabet is not None and V != len(alphabet):
        raise DimensionMismatch(f"{path}: file has V={V} but alphabet has {len(alphabet)} tokens")
    expected = HEADER.size + 4 * T * V
    if len(raw) < expected:
        raise TruncatedFile(f"{path}: expected {expected} bytes, found {len(raw)}")
    if len(raw) > expected:
        raise EmissionFormatError(f"{path}: {len(raw) - expected} trailing bytes after data")
    values = np.frombuffer(raw, dtype="<f4", count=T * V, offset=HEADER.size).reshape(T, V)
    values = np.where(values == NEG_INF_SENTINEL, np.float32(-np.inf), values)
    return EmissionMatrix(values, normalized=bool(flag), frame_duration=frame_duration)
