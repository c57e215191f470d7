"""CTC decoding: best path, LM-fused prefix beam search, exhaustive oracle."""
from .batch import decode_batch, greedy_result
from .beam import (
    BeamHypothesis,
    DecodeResult,
    DecoderConfig,
    beam_search,
    beam_search_decode,
    logaddexp,
)
from .estimator import CTCDecoder
from .greedy import collapse, greedy_decode, greedy_labels
from .oracle import oracle_decode

__all__ = [
    "BeamHypothesis",
    "CTCDecoder",
    "DecodeResult",
    "DecoderConfig",
    "beam_search",
    "beam_search_decode",
    "collapse",
    "decode_batch",
    "greedy_decode",
    "greedy_labels",
    "greedy_result",
    "logaddexp",
    "oracle_decode",
]
