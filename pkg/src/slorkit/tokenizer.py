"""Whitespace tokenization and a trainable byte-pair-encoding subword model.

The BPE model is character-level with an end-of-word marker attached as a
suffix to the final symbol of each word, which makes decoding unambiguous.
Training greedily merges the most frequent adjacent symbol pair each round;
ties break lexicographically on the (left, right) pair, so training is
fully deterministic.
"""

from __future__ import annotations

import heapq
from collections import Counter
from typing import Iterable, List, Optional, Sequence, Tuple

from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DataError, TrainingError
from .validation import as_token_lists, check_fitted

END_OF_WORD_MARKER = "</w>"
UNK_PIECE = "<unk>"

BPE_FORMAT_VERSION = "v1"


def whitespace_tokenize(text: str) -> List[str]:
    """Split cleaned text on whitespace; never yields empty tokens."""
    return text.split()


def _word_symbols(word: str, marker: str) -> Tuple[str, ...]:
    return tuple(word[:-1]) + (word[-1] + marker,)


def _merge_symbols(symbols: Sequence[str], pair: Tuple[str, str], new_sym: str) -> List[str]:
    out: List[str] = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == pair[0] and symbols[i + 1] == pair[1]:
            out.append(new_sym)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


class BpeTokenizer(BaseEstimator, TransformerMixin):
    """Trainable BPE subword tokenizer.

    Learned state after fit():
      merges_   ordered list of (left, right) symbol pairs
      vocab_    every producible piece, incl. single characters, their
                marker-suffixed variants, and the unknown piece
      ranks_    pair -> merge priority (position in merges_)
    """

    def __init__(self, num_merges: int = 4000, end_of_word_marker: str = END_OF_WORD_MARKER):
        self.num_merges = num_merges
        self.end_of_word_marker = end_of_word_marker

    # -- training ----------------------------------------------------------

    def fit(self, corpus: Iterable, y=None) -> "BpeTokenizer":
        if self.num_merges < 0:
            raise ValueError(f"num_merges must be >= 0, got {self.num_merges}")
        marker = self.end_of_word_marker
        word_freq: Counter = Counter()
        for tokens in as_token_lists(corpus):
            word_freq.update(tokens)
        if not word_freq:
            raise TrainingError("cannot train BPE on an empty corpus")
        for w in word_freq:
            if marker in w:
                raise DataError(f"word {w!r} contains the reserved marker {marker!r}")

        words: List[Tuple[List[str], int]] = [
            (list(_word_symbols(w, marker)), n) for w, n in sorted(word_freq.items())
        ]
        alphabet = set()
        for syms, _ in words:
            alphabet.update(syms)
        # allow marked/unmarked variant of every seen character so any word
        # over the training alphabet stays encodable at any position
        for w in word_freq:
            for ch in w:
                alphabet.add(ch)
                alphabet.add(ch + marker)

        pair_counts: Counter = Counter()
        pair_words: dict = {}
        for wi, (syms, n) in enumerate(words):
            for p in zip(syms, syms[1:]):
                pair_counts[p] += n
                pair_words.setdefault(p, set()).add(wi)

        # max-heap with lazy invalidation; heap order (-count, pair) picks the
        # highest count and the lexicographically smallest pair on ties
        heap = [(-c, p) for p, c in pair_counts.items()]
        heapq.heapify(heap)

        merges: List[Tuple[str, str]] = []
        vocab = set(alphabet) | {UNK_PIECE}
        while len(merges) < self.num_merges and heap:
            neg, pair = heapq.heappop(heap)
            count = pair_counts.get(pair, 0)
            if count != -neg:
                continue  # stale entry
            if count < 2:
                break
            new_sym = pair[0] + pair[1]
            merges.append(pair)
            vocab.add(new_sym)
            touched: Counter = Counter()
            for wi in list(pair_words.get(pair, ())):
                syms, n = words[wi]
                old_pairs = Counter(zip(syms, syms[1:]))
                new_syms = _merge_symbols(syms, pair, new_sym)
                new_pairs = Counter(zip(new_syms, new_syms[1:]))
                words[wi] = (new_syms, n)
                for p in set(old_pairs) | set(new_pairs):
                    delta = new_pairs.get(p, 0) - old_pairs.get(p, 0)
                    if delta:
                        pair_counts[p] = pair_counts.get(p, 0) + delta * n
                        touched[p] = pair_counts[p]
                        if pair_counts[p] <= 0:
                            del pair_counts[p]
                    if p in new_pairs:
                        pair_words.setdefault(p, set()).add(wi)
                    else:
                        s = pair_words.get(p)
                        if s is not None:
                            s.discard(wi)
            pair_words.pop(pair, None)
            pair_counts.pop(pair, None)
            for p, c in touched.items():
                if c >= 2 and p in pair_counts:
                    heapq.heappush(heap, (-c, p))

        self.merges_ = merges
        self.ranks_ = {p: i for i, p in enumerate(merges)}
        self.vocab_ = vocab
        self.alphabet_ = alphabet
        return self

    # -- encoding / decoding -------------------------------------------------

    def encode(self, word: str) -> List[str]:
        """Encode one word into subword pieces; unseen symbols become the
        unknown piece."""
        check_fitted(self, "merges_", "vocab_")
        if not word:
            return []
        symbols = [
            s if s in self.alphabet_ else UNK_PIECE
            for s in _word_symbols(word, self.end_of_word_marker)
        ]
        while len(symbols) > 1:
            ranked = [
                (self.ranks_[p], p)
                for p in set(zip(symbols, symbols[1:]))
                if p in self.ranks_
            ]
            if not ranked:
                break
            _, best = min(ranked)
            symbols = _merge_symbols(symbols, best, best[0] + best[1])
        return symbols

    def decode(self, pieces: Sequence[str]) -> str:
        """Inverse of encode on its image; strips the end-of-word marker."""
        check_fitted(self, "merges_", "vocab_")
        marker = self.end_of_word_marker
        if not pieces:
            return ""
        chars: List[str] = []
        last = len(pieces) - 1
        for i, p in enumerate(pieces):
            if p == UNK_PIECE:
                chars.append(p)
                continue
            if p.endswith(marker):
                if i != last:
                    raise DataError(f"end-of-word marker inside piece sequence at {i}")
                chars.append(p[: -len(marker)])
            elif i == last:
                raise DataError("final piece is missing the end-of-word marker")
            else:
                chars.append(p)
        return "".join(chars)

    def encode_tokens(self, tokens: Sequence[str]) -> List[str]:
        """Encode a token sequence into one flat subword sequence."""
        out: List[str] = []
        for t in tokens:
            out.extend(self.encode(t))
        return out

    def transform(self, corpus: Iterable) -> List[List[str]]:
        """Encode a corpus of sentences into subword token lists."""
        return [self.encode_tokens(toks) for toks in as_token_lists(corpus)]

    # -- serialization -------------------------------------------------------

    def save(self, path, header: str = "") -> None:
        """Line-oriented model file; identical models serialize byte-identically."""
        check_fitted(self, "merges_", "vocab_")
        lines = []
        if header:
            lines.append("#: " + header)
        lines.append(f"bpe {BPE_FORMAT_VERSION} merges={len(self.merges_)}")
        for left, right in self.merges_:
            lines.append(f"{left}\t{right}")
        vocab = sorted(self.vocab_)
        lines.append(f"vocab {len(vocab)}")
        lines.extend(vocab)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "BpeTokenizer":
        with open(path, encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
        lines = [ln for ln in lines if not ln.startswith("#: ")]
        if not lines or not lines[0].startswith(f"bpe {BPE_FORMAT_VERSION} merges="):
            raise DataError(f"{path}: not a bpe {BPE_FORMAT_VERSION} model file")
        n_merges = int(lines[0].rsplit("=", 1)[1])
        merges = []
        for ln in lines[1 : 1 + n_merges]:
            left, right = ln.split("\t")
            merges.append((left, right))
        vocab_header = lines[1 + n_merges]
        if not vocab_header.startswith("vocab "):
            raise DataError(f"{path}: missing vocab section")
        n_vocab = int(vocab_header.split()[1])
        vocab = set(lines[2 + n_merges : 2 + n_merges + n_vocab])
        model = cls(num_merges=n_merges)
        model.merges_ = merges
        model.ranks_ = {p: i for i, p in enumerate(merges)}
        model.vocab_ = vocab
        marker = model.end_of_word_marker
        model.alphabet_ = {v for v in vocab if len(v) == 1} | {
            v for v in vocab if v.endswith(marker) and len(v) == len(marker) + 1
        }
        return model
