"""Input validation helpers shared by the estimators."""
from __future__ import annotations

import numbers

import numpy as np

from .alphabet import Alphabet, EmissionMatrix, _check_values
from .exceptions import DimensionMismatch


def check_emissions(X, alphabet: Alphabet | None = None) -> np.ndarray:
    """Return ``X`` as a C-contiguous float64 (T, V) array of log-probabilities.

    Accepts an :class:`EmissionMatrix` or anything array-like. Raw arrays keep
    their precision, so float64 inputs are decoded without float32 rounding.
    """
    if isinstance(X, EmissionMatrix):
        arr = X.values.astype(np.float64)
    else:
        arr = np.asarray(X, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D (frames, tokens) array, got shape {arr.shape}")
        _check_values(arr)
    if alphabet is not None and arr.shape[1] != len(alphabet):
        raise DimensionMismatch(
            f"emissions have {arr.shape[1]} columns but alphabet has {len(alphabet)} tokens"
        )
    return np.ascontiguousarray(arr)


def check_emission_batch(X, alphabet: Alphabet | None = None) -> list[np.ndarray]:
    """Validate a batch of emission matrices.

    A single 3-D array is split along its first axis.
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        X = list(X)
    return [check_emissions(x, alphabet) for x in X]


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_alphabet(alphabet) -> Alphabet:
    if isinstance(alphabet, Alphabet):
        return alphabet
    if isinstance(alphabet, dict):
        return Alphabet(
            tokens=alphabet["tokens"],
            blank_index=alphabet.get("blank_index", 0),
            delimiter_index=alphabet.get("delimiter_index"),
        )
    raise TypeError(f"expected an Alphabet, got {type(alphabet).__name__}")
