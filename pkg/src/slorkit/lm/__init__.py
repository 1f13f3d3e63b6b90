"""Language models sharing one scoring contract.

Every model exposes token_log_probs(tokens) and sentence_log_prob(tokens)
in natural log.  Conditional models (n-gram, recurrent) predict the tokens
plus one end-of-sentence event; the unigram model scores only the surface
tokens, matching the unigram product used by the fluency scorer.
"""

from .base import (
    LOG_PROB_FLOOR,
    PROB_FLOOR,
    LanguageModel,
    perplexity,
    sentence_log_prob,
)
from .io import load_model, save_model
from .kneser_ney import KneserNeyLm
from .rnn import TinyRnnLm
from .unigram import UnigramLm
from .vocab import BOS_TOKEN, EOS_TOKEN, UNK_TOKEN, Vocabulary

__all__ = [
    "LOG_PROB_FLOOR",
    "PROB_FLOOR",
    "LanguageModel",
    "perplexity",
    "sentence_log_prob",
    "load_model",
    "save_model",
    "KneserNeyLm",
    "TinyRnnLm",
    "UnigramLm",
    "BOS_TOKEN",
    "EOS_TOKEN",
    "UNK_TOKEN",
    "Vocabulary",
]
