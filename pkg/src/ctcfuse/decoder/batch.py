"""Batch decoding, optionally across worker processes.

Results come back in input order whatever the number of jobs, and each item
is decoded by exactly the sequential code path, so outputs are identical.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from ..alphabet import Alphabet
from ..exceptions import BatchItemError
from ..validation import check_emissions
from .beam import DecodeResult, DecoderConfig, beam_search_decode
from .greedy import greedy_labels
from ..textnorm import NormalizedTranscript

_worker_state: dict = {}


def greedy_result(emissions, alphabet: Alphabet) -> DecodeResult:
    labels, score = greedy_labels(emissions, alphabet)
    return DecodeResult(NormalizedTranscript(alphabet.labels_to_words(labels)), score, labels)


def _decode_one(index, x, alphabet, config, greedy):
    try:
        if greedy:
            return greedy_result(x, alphabet)
        return beam_search_decode(x, alphabet, config)
    except Exception as exc:
        raise BatchItemError(index, exc) from exc


def _init_worker(alphabet, config, greedy):
    _worker_state.update(alphabet=alphabet, config=config, greedy=greedy)


def _worker(item):
    index, x = item
    s = _worker_state
    return _decode_one(index, x, s["alphabet"], s["config"], s["greedy"])


def decode_batch(
    emissions: Sequence,
    alphabet: Alphabet,
    config: Optional[DecoderConfig] = None,
    n_jobs: int = 1,
    greedy: bool = False,
) -> list[DecodeResult]:
    """Decode every matrix; a failing item raises :class:`BatchItemError` with its index."""
    config = config or DecoderConfig()
    arrays = []
    for i, e in enumerate(emissions):
        try:
            arrays.append(check_emissions(e, alphabet))
        except Exception as exc:
            raise BatchItemError(i, exc) from exc
    if n_jobs == 1 or len(arrays) <= 1:
        return [_decode_one(i, x, alphabet, config, greedy) for i, x in enumerate(arrays)]
    workers = min(n_jobs, len(arrays))
    chunksize = max(1, len(arrays) // (4 * workers))
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(alphabet, config, greedy)
    ) as pool:
        return list(pool.map(_worker, enumerate(arrays), chunksize=chunksize))
