"""Independent reference implementations used to verify the real ones.

The n-gram oracle evaluates the interpolated Kneser-Ney recursion by
scanning the corpus from scratch on every call (no precomputed tables),
and the correlation oracle evaluates the raw product-moment formula in
exact rational arithmetic.  Both are deliberately slow and simple.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import List, Sequence

import mpmath

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"


class KnOracle:
    """Brute-force interpolated Kneser-Ney over a tiny corpus."""

    def __init__(self, corpus: Sequence[Sequence[str]], order: int, discount: float,
                 unk_min_count: int = 1):
        assert order >= 2
        self.order = order
        self.discount = discount
        counts = Counter(t for s in corpus for t in s)
        kept = {t for t, c in counts.items() if c >= unk_min_count}
        norm = lambda t: t if t in kept else UNK
        self.sents: List[List[str]] = [
            [BOS] * (order - 1) + [norm(t) for t in s] + [EOS] for s in corpus
        ]
        self.predicted = sorted(kept) + [EOS, UNK]
        self.kept = kept

    def _raw_count(self, gram: List[str]) -> int:
        k = len(gram)
        return sum(
            1 for s in self.sents for i in range(len(s) - k + 1) if s[i : i + k] == gram
        )

    def _distinct_left(self, gram: List[str]) -> int:
        k = len(gram)
        seen = set()
        for s in self.sents:
            for i in range(1, len(s) - k + 1):
                if s[i : i + k] == gram:
                    seen.add(s[i - 1])
        return len(seen)

    def _cnt(self, m: int, gram: List[str]) -> int:
        if m == self.order - 1:
            return self._raw_count(gram)
        return self._distinct_left(gram)

    def _p(self, w: str, ctx: List[str]) -> float:
        m = len(ctx)
        lower = 1.0 / len(self.predicted) if m == 0 else self._p(w, ctx[1:])
        per_target = [self._cnt(m, ctx + [v]) for v in self.predicted]
        total = sum(per_target)
        if total == 0:
            return lower
        kinds = sum(1 for c in per_target if c > 0)
        c = self._cnt(m, ctx + [w])
        d = self.discount
        return max(c - d, 0.0) / total + d * kinds / total * lower

    def _norm_context(self, context: Sequence[str]) -> List[str]:
        ctx = [t if t in self.kept or t in (BOS, EOS) else UNK for t in context]
        n = self.order
        if len(ctx) >= n - 1:
            return ctx[len(ctx) - (n - 1) :]
        return [BOS] * (n - 1 - len(ctx)) + ctx

    def conditional_prob(self, token: str, context: Sequence[str]) -> float:
        w = token if token in self.kept or token == EOS else UNK
        return self._p(w, self._norm_context(context))

    def sentence_log_prob(self, tokens: Sequence[str], floor: float = -50.0) -> float:
        total = 0.0
        history: List[str] = []
        for target in list(tokens) + [EOS]:
            p = self.conditional_prob(target, history)
            total += math.log(p) if p > math.exp(floor) else floor
            history.append(target if target in self.kept else UNK)
        return total


def exact_pearson(h: Sequence[float], f: Sequence[float]) -> float:
    """Raw product-moment formula evaluated in exact rational arithmetic,
    with the two square roots taken at 60 decimal digits."""
    assert len(h) == len(f)
    hf = [Fraction(x) for x in h]
    ff = [Fraction(x) for x in f]
    n = len(hf)
    s_h, s_f = sum(hf), sum(ff)
    s_hf = sum(a * b for a, b in zip(hf, ff))
    s_h2 = sum(a * a for a in hf)
    s_f2 = sum(b * b for b in ff)
    num = n * s_hf - s_h * s_f
    d1 = n * s_h2 - s_h * s_h
    d2 = n * s_f2 - s_f * s_f
    assert d1 > 0 and d2 > 0, "constant vector"
    with mpmath.workdps(60):
        val = (mpmath.mpf(num.numerator) / num.denominator) / (
            mpmath.sqrt(mpmath.mpf(d1.numerator) / d1.denominator)
            * mpmath.sqrt(mpmath.mpf(d2.numerator) / d2.denominator)
        )
        return float(val)
