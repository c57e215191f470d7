"""CTC decoding with n-gram shallow fusion, ARPA language models, and the
data preparation and WER tooling around them."""
from .alphabet import Alphabet, EmissionMatrix, load_emissions, save_emissions
from .decoder import (
    CTCDecoder,
    DecodeResult,
    DecoderConfig,
    beam_search_decode,
    decode_batch,
    greedy_decode,
    oracle_decode,
)
from .lm import NGramLM, NGramModel, read_arpa, write_arpa
from .manifest import ScheduleSpec, effective_epochs, stats
from .metrics import WerReport, aggregate, evaluate_corpus, wer
from .segmenter import PauseSlicer, Segment, Utterance, slice_corpus, slice_utterance
from .textnorm import NormalizationConfig, NormalizedTranscript, TranscriptNormalizer, normalize, render

__version__ = "0.1.0"
