"""Interpolated Kneser-Ney n-gram model.

Absolute discount d at every order, continuation counts below the top
order, and a uniform base distribution over the predictable vocabulary
(every type plus end-of-sentence plus unknown).  Sentences are padded
with n-1 begin markers and one end marker.

With cnt_m the count table at context length m (raw counts at the top,
continuation counts below) and T(c) = sum_w cnt(c+w), N(c) = |{w :
cnt(c+w) > 0}|:

    P(w | c) = max(cnt(c+w) - d, 0) / T(c)  +  d * N(c) / T(c) * P(w | c[1:])

An unseen context (T(c) == 0) backs off to the lower order exactly; the
recursion bottoms out in the uniform distribution.  Begin-of-sentence is
excluded from every count table as a target, so conditional distributions
over the predictable vocabulary sum to one.
"""

from __future__ import annotations

from collections import Counter
from typing import Dict, Iterable, List, Sequence, Tuple

from sklearn.base import BaseEstimator

from ..errors import TrainingError
from ..validation import as_token_lists, check_fitted, check_token_list
from .base import LanguageModel, floor_log
from .vocab import BOS_ID, UNK_ID, EOS_ID, Vocabulary


def _raw_ngram_counts(padded: List[List[int]], order: int) -> Dict[int, Counter]:
    raw: Dict[int, Counter] = {k: Counter() for k in range(1, order + 1)}
    for seq in padded:
        for k in range(1, order + 1):
            table = raw[k]
            for i in range(len(seq) - k + 1):
                table[tuple(seq[i : i + k])] += 1
    return raw


class KneserNeyLm(LanguageModel, BaseEstimator):
    """Interpolated Kneser-Ney language model over word or subword tokens.

    unk_min_count drops types rarer than the threshold from the vocabulary
    at training time, so their occurrences train the unknown token; the
    default of 1 keeps every observed type.
    """

    def __init__(self, order: int = 5, discount: float = 0.75, unk_min_count: int = 1):
        self.order = order
        self.discount = discount
        self.unk_min_count = unk_min_count

    def fit(self, corpus: Iterable, y=None) -> "KneserNeyLm":
        if int(self.order) != self.order or self.order < 2:
            raise ValueError(f"order must be an integer >= 2, got {self.order}")
        if not 0.0 < self.discount < 1.0:
            raise ValueError(f"discount must be in (0, 1), got {self.discount}")
        if self.unk_min_count < 1:
            raise ValueError(f"unk_min_count must be >= 1, got {self.unk_min_count}")
        token_lists = [t for t in as_token_lists(corpus) if t]
        if not token_lists:
            raise TrainingError("cannot train an n-gram model on an empty corpus")
        vocab = Vocabulary.from_corpus(token_lists, min_count=self.unk_min_count)
        n = self.order
        padded = [
            [BOS_ID] * (n - 1) + vocab.encode(toks) + [EOS_ID] for toks in token_lists
        ]
        return self._from_raw_counts(vocab, _raw_ngram_counts(padded, n))

    def _from_raw_counts(self, vocab: Vocabulary, raw: Dict[int, Counter]) -> "KneserNeyLm":
        n = self.order
        # counts_[m]: table over (m+1)-grams at context length m; grams with a
        # begin-of-sentence target are excluded everywhere
        counts: Dict[int, Dict[tuple, int]] = {}
        counts[n - 1] = {g: c for g, c in raw[n].items() if g[-1] != BOS_ID}
        for m in range(n - 2, -1, -1):
            cont: Counter = Counter()
            for gram in raw[m + 2]:
                if gram[-1] != BOS_ID:
                    cont[gram[1:]] += 1
            counts[m] = dict(cont)
        totals: Dict[int, Dict[tuple, Tuple[int, int]]] = {}
        for m, table in counts.items():
            agg: Dict[tuple, List[int]] = {}
            for gram, c in table.items():
                ctx = gram[:-1]
                slot = agg.setdefault(ctx, [0, 0])
                slot[0] += c
                slot[1] += 1
            totals[m] = {ctx: (t, k) for ctx, (t, k) in agg.items()}
        self.vocab_ = vocab
        self.raw_counts_ = raw
        self._counts = counts
        self._totals = totals
        self._base = 1.0 / vocab.predicted_size
        return self

    # -- probabilities -------------------------------------------------------

    def _p(self, w: int, ctx: tuple) -> float:
        d = self.discount
        m = len(ctx)
        if m == 0:
            t_n = self._totals[0].get((), None)
            if t_n is None:
                return self._base
            total, kinds = t_n
            c = self._counts[0].get((w,), 0)
            return max(c - d, 0.0) / total + d * kinds / total * self._base
        lower = self._p(w, ctx[1:])
        t_n = self._totals[m].get(ctx, None)
        if t_n is None:
            return lower  # unseen context: exact backoff
        total, kinds = t_n
        c = self._counts[m].get(ctx + (w,), 0)
        return max(c - d, 0.0) / total + d * kinds / total * lower

    def _context_ids(self, context: Sequence[str]) -> tuple:
        ids = self.vocab_.encode(context)
        n = self.order
        if len(ids) >= n - 1:
            return tuple(ids[-(n - 1):])
        return tuple([BOS_ID] * (n - 1 - len(ids)) + ids)

    def conditional_prob(self, token: str, context: Sequence[str]) -> float:
        """P(token | context); out-of-vocabulary symbols map to unknown."""
        check_fitted(self, "vocab_")
        w = self.vocab_.token_to_id.get(token, UNK_ID)
        if w == BOS_ID:
            w = UNK_ID  # begin-of-sentence is never a prediction target
        return self._p(w, self._context_ids(context))

    def prob_dist(self, context: Sequence[str]) -> Dict[str, float]:
        """Full conditional distribution over the predictable vocabulary."""
        check_fitted(self, "vocab_")
        ctx = self._context_ids(context)
        return {
            self.vocab_.id_to_token[w]: self._p(w, ctx)
            for w in range(1, len(self.vocab_))  # skip BOS
        }

    def token_log_probs(self, tokens: Sequence[str]) -> List[float]:
        check_fitted(self, "vocab_")
        check_token_list(tokens)
        n = self.order
        ids = self.vocab_.encode(tokens)
        history = [BOS_ID] * (n - 1) + ids
        out: List[float] = []
        for i, target in enumerate(ids + [EOS_ID]):
            ctx = tuple(history[i : i + n - 1])
            out.append(floor_log(self._p(target, ctx)))
        return out
