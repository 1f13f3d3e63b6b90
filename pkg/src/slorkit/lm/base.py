"""Shared language-model contract and diagnostics."""

from __future__ import annotations

import math
from typing import Iterable, List, Sequence

from ..errors import DataError
from ..validation import as_token_lists

# Probabilities are floored at exp(-50) before the log so degenerate
# contexts never yield -inf; scorers flag tokens that hit the floor.
LOG_PROB_FLOOR = -50.0
PROB_FLOOR = math.exp(LOG_PROB_FLOOR)


def floor_log(p: float) -> float:
    """Natural log of p, floored at LOG_PROB_FLOOR."""
    if p <= PROB_FLOOR:
        return LOG_PROB_FLOOR
    return math.log(p)


class LanguageModel:
    """Behavioral contract: per-token conditional log-probabilities.

    sentence_log_prob is always the exact sum of token_log_probs, and
    every entry is <= 0.
    """

    def token_log_probs(self, tokens: Sequence[str]) -> List[float]:
        raise NotImplementedError

    def sentence_log_prob(self, tokens: Sequence[str]) -> float:
        if not tokens:
            raise DataError("cannot score an empty token list")
        return sum(self.token_log_probs(tokens))

    def predicted_token_count(self, tokens: Sequence[str]) -> int:
        """Number of prediction events for a sentence; conditional models
        predict each token plus end-of-sentence."""
        return len(tokens) + 1


def sentence_log_prob(model: LanguageModel, tokens: Sequence[str]) -> float:
    return model.sentence_log_prob(tokens)


def perplexity(model: LanguageModel, corpus: Iterable) -> float:
    """exp(-(total log prob) / (total predicted tokens)) over a corpus."""
    token_lists = as_token_lists(corpus)
    if not token_lists:
        raise DataError("cannot compute perplexity on an empty corpus")
    total_lp = 0.0
    total_n = 0
    for tokens in token_lists:
        total_lp += model.sentence_log_prob(tokens)
        total_n += model.predicted_token_count(tokens)
    return math.exp(-total_lp / total_n)
