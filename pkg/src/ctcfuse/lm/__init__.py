"""Word n-gram language models: counting, pruning, Kneser-Ney, ARPA."""
from .arpa import read_arpa, write_arpa
from .counting import (
    BOS,
    EOS,
    MAX_ORDER,
    UNK,
    NGramCounts,
    PruneThresholds,
    count_ngrams,
    prune,
)
from .estimator import NGramLM, as_model
from .kneser_ney import estimate
from .model import NGramModel

__all__ = [
    "BOS",
    "EOS",
    "UNK",
    "MAX_ORDER",
    "NGramCounts",
    "NGramLM",
    "NGramModel",
    "PruneThresholds",
    "as_model",
    "count_ngrams",
    "estimate",
    "prune",
    "read_arpa",
    "write_arpa",
]
