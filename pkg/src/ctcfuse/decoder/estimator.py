"""Scikit-learn style CTC decoder."""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..lm.estimator import as_model
from ..metrics import aggregate, wer
from ..textnorm import normalize
from ..validation import check_alphabet, check_emission_batch
from .batch import decode_batch
from .beam import DecoderConfig


class CTCDecoder(BaseEstimator):
    """Emission matrices in, transcripts out.

    ``fit`` only validates the parameters; nothing is learned. Having it makes
    the decoder usable in pipelines and in ``GridSearchCV`` over ``alpha`` and
    ``beta``, where :meth:`score` (negated corpus WER) is maximized.

    Parameters
    ----------
    alphabet : Alphabet
    beam_width, alpha, beta, token_min_logp, nbest :
        See :class:`DecoderConfig`.
    lm : NGramModel or fitted NGramLM, optional
    greedy : bool, default=False
        Best-path decoding; LM settings are ignored.
    n_jobs : int, default=1
        Worker processes for batch decoding.
    """

    def __init__(
        self,
        alphabet=None,
        beam_width=100,
        alpha=0.5,
        beta=1.5,
        token_min_logp=-5.0,
        lm=None,
        greedy=False,
        nbest=1,
        n_jobs=1,
    ):
        self.alphabet = alphabet
        self.beam_width = beam_width
        self.alpha = alpha
        self.beta = beta
        self.token_min_logp = token_min_logp
        self.lm = lm
        self.greedy = greedy
        self.nbest = nbest
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        if self.alphabet is None:
            raise ValueError("CTCDecoder needs an alphabet")
        self.alphabet_ = check_alphabet(self.alphabet)
        self.config_ = DecoderConfig(
            beam_width=self.beam_width,
            alpha=self.alpha,
            beta=self.beta,
            token_min_logp=self.token_min_logp,
            lm=as_model(self.lm),
            nbest=self.nbest,
        )
        return self

    def decode(self, X) -> list:
        """Full :class:`DecodeResult` objects for a batch of emission matrices."""
        if not hasattr(self, "config_"):
            self.fit()
        check_is_fitted(self, "config_")
        arrays = check_emission_batch(X, None)
        return decode_batch(arrays, self.alphabet_, self.config_, n_jobs=self.n_jobs, greedy=self.greedy)

    def predict(self, X) -> list[str]:
        return [r.text for r in self.decode(X)]

    def score(self, X, y) -> float:
        """Negated corpus WER of the predictions against reference texts ``y``."""
        hyps = self.predict(X)
        reports = [wer(normalize(ref), normalize(hyp)) for ref, hyp in zip(y, hyps)]
        return -aggregate(reports).wer
