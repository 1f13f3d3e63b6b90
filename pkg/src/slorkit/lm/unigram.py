"""Add-k smoothed unigram model.

p(t) = (count(t) + k) / (total + k * (V + 1)); the extra slot is the
unknown token, so the distribution over the V types plus unknown sums to
one exactly.  Scores cover only the surface tokens, with no
end-of-sentence factor, matching the unigram product in the fluency score.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Sequence

from sklearn.base import BaseEstimator

from ..errors import TrainingError
from ..validation import as_token_lists, check_fitted, check_token_list
from .base import LOG_PROB_FLOOR, LanguageModel
from .vocab import Vocabulary


class UnigramLm(LanguageModel, BaseEstimator):
    def __init__(self, smoothing_k: float = 0.0):
        self.smoothing_k = smoothing_k

    def fit(self, corpus: Iterable, y=None) -> "UnigramLm":
        if self.smoothing_k < 0:
            raise ValueError(f"smoothing_k must be >= 0, got {self.smoothing_k}")
        token_lists = as_token_lists(corpus)
        vocab = Vocabulary.from_corpus(token_lists)
        if vocab.total == 0:
            raise TrainingError("cannot train a unigram model on an empty corpus")
        return self._from_counts(vocab)

    def _from_counts(self, vocab: Vocabulary) -> "UnigramLm":
        k = float(self.smoothing_k)
        denom = vocab.total + k * (len(vocab.counts) + 1)
        self.vocab_ = vocab
        self.log_probs_: Dict[str, float] = {
            t: math.log((n + k) / denom) for t, n in vocab.counts.items()
        }
        self.unk_log_prob_ = math.log(k / denom) if k > 0 else float("-inf")
        return self

    def prob(self, token: str) -> float:
        check_fitted(self, "log_probs_")
        lp = self.log_probs_.get(token, self.unk_log_prob_)
        return math.exp(lp)

    def token_log_probs(self, tokens: Sequence[str]) -> List[float]:
        check_fitted(self, "log_probs_")
        check_token_list(tokens)
        unk = self.unk_log_prob_
        return [max(self.log_probs_.get(t, unk), LOG_PROB_FLOOR) for t in tokens]

    def predicted_token_count(self, tokens: Sequence[str]) -> int:
        return len(tokens)
