"""Fluency scoring: log-odds of a sentence under a language model versus
its unigram probability, normalized by length.

score = (ln PM(S) - ln p_u(S)) / |S|

PM(S) comes from the conditional model (which also predicts the
end-of-sentence event); p_u(S) multiplies the unconditional probabilities
of the surface tokens only, and |S| counts surface tokens.  For the
subword variant both models operate on the BPE piece sequence and |S| is
the piece count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from sklearn.base import BaseEstimator

from .corpus import COMMENT_PREFIX, Sentence, read_lines
from .errors import DataError
from .lm.base import LOG_PROB_FLOOR, LanguageModel
from .lm.unigram import UnigramLm
from .tokenizer import BpeTokenizer
from .validation import as_token_lists, check_fitted

SCORES_FORMAT_VERSION = "v1"

_SCORE_COLUMNS = ("id", "slor", "lm_logp", "uni_logp", "len", "floored")


@dataclass
class FluencyScore:
    sentence_id: str
    slor: float
    lm_log_prob: float
    unigram_log_prob: float
    length: int
    floored: bool
    token_level: Optional[List[Tuple[float, float]]] = None


def _score_tokens(
    lm: LanguageModel,
    unigram: UnigramLm,
    sentence_id: str,
    tokens: Sequence[str],
    keep_token_level: bool = False,
) -> FluencyScore:
    if not tokens:
        raise DataError(f"cannot score empty sentence {sentence_id!r}")
    lm_lps = lm.token_log_probs(tokens)
    uni_lps = unigram.token_log_probs(tokens)
    lm_total = sum(lm_lps)
    uni_total = sum(uni_lps)
    floored = any(lp <= LOG_PROB_FLOOR for lp in lm_lps + uni_lps)
    token_level = list(zip(lm_lps, uni_lps)) if keep_token_level else None
    return FluencyScore(
        sentence_id=sentence_id,
        slor=(lm_total - uni_total) / len(tokens),
        lm_log_prob=lm_total,
        unigram_log_prob=uni_total,
        length=len(tokens),
        floored=floored,
        token_level=token_level,
    )


def slor(
    lm: LanguageModel,
    unigram: UnigramLm,
    sentence: Sentence,
    keep_token_level: bool = False,
) -> FluencyScore:
    """Word-level fluency score of one sentence."""
    return _score_tokens(lm, unigram, sentence.id, sentence.tokens, keep_token_level)


def wpslor(
    lm: LanguageModel,
    unigram: UnigramLm,
    bpe: BpeTokenizer,
    sentence: Sentence,
    keep_token_level: bool = False,
) -> FluencyScore:
    """Subword-level fluency score; models must be trained on the same
    BPE encoding."""
    pieces = bpe.encode_tokens(sentence.tokens)
    return _score_tokens(lm, unigram, sentence.id, pieces, keep_token_level)


def mean_log_prob(lm: LanguageModel, sentence: Sentence) -> float:
    """Baseline scorer: ln PM(S) / |S| without the unigram normalization."""
    if not sentence.tokens:
        raise DataError(f"cannot score empty sentence {sentence.id!r}")
    return lm.sentence_log_prob(sentence.tokens) / len(sentence.tokens)


class SlorScorer(BaseEstimator):
    """Estimator wrapper: fit trains the conditional and unigram models on
    one corpus (BPE-encoded first when a tokenizer is supplied), transform
    maps sentences to FluencyScore objects.

    Pre-fitted models may be passed in, in which case transform works
    without calling fit.
    """

    def __init__(self, lm, unigram, bpe: Optional[BpeTokenizer] = None):
        self.lm = lm
        self.unigram = unigram
        self.bpe = bpe

    def fit(self, corpus: Iterable, y=None) -> "SlorScorer":
        token_lists = as_token_lists(corpus)
        if self.bpe is not None:
            self.bpe.fit(token_lists)
            token_lists = self.bpe.transform(token_lists)
        self.lm.fit(token_lists)
        self.unigram.fit(token_lists)
        return self

    def score_sentence(self, sentence: Sentence) -> FluencyScore:
        check_fitted(self.unigram, "log_probs_")
        if self.bpe is not None:
            return wpslor(self.lm, self.unigram, self.bpe, sentence)
        return slor(self.lm, self.unigram, sentence)

    def transform(self, sentences: Iterable[Sentence]) -> List[FluencyScore]:
        return [self.score_sentence(s) for s in sentences]


# -- score files -----------------------------------------------------------------


def write_scores(path, scores: Iterable[FluencyScore], header: str = "") -> None:
    """Tab-separated score report with 9-significant-digit floats."""
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(COMMENT_PREFIX + header + "\n")
        fh.write("\t".join(_SCORE_COLUMNS) + "\n")
        for s in scores:
            fh.write(
                f"{s.sentence_id}\t{s.slor:.9g}\t{s.lm_log_prob:.9g}\t"
                f"{s.unigram_log_prob:.9g}\t{s.length}\t{int(s.floored)}\n"
            )


def read_scores(path) -> List[FluencyScore]:
    lines = read_lines(path)
    if not lines or lines[0] != "\t".join(_SCORE_COLUMNS):
        raise DataError(f"{path}: not a scores {SCORES_FORMAT_VERSION} file")
    out = []
    for ln in lines[1:]:
        sid, slor_v, lm_lp, uni_lp, length, floored = ln.split("\t")
        out.append(
            FluencyScore(
                sentence_id=sid,
                slor=float(slor_v),
                lm_log_prob=float(lm_lp),
                unigram_log_prob=float(uni_lp),
                length=int(length),
                floored=bool(int(floored)),
            )
        )
    return out
