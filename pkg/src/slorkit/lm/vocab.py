"""Token vocabulary with reserved begin/end/unknown symbols."""

from __future__ import annotations

from collections import Counter
from typing import Dict, Iterable, List, Sequence

from ..errors import DataError

BOS_TOKEN = "<s>"
EOS_TOKEN = "</s>"
UNK_TOKEN = "<unk>"
BOS_ID = 0
EOS_ID = 1
UNK_ID = 2
_RESERVED = (BOS_TOKEN, EOS_TOKEN, UNK_TOKEN)


class Vocabulary:
    """Bidirectional token/id map.

    Ids 0..2 are reserved for begin-of-sentence, end-of-sentence and
    unknown; remaining ids follow in sorted token order so identical
    corpora always produce identical id assignments.  Begin-of-sentence
    is a context-only symbol and is never a prediction target.
    """

    def __init__(self, counts: Dict[str, int]):
        for r in _RESERVED:
            if r in counts:
                raise DataError(f"corpus contains reserved token {r!r}")
        self.counts = dict(counts)
        self.total = sum(counts.values())
        self.id_to_token: List[str] = list(_RESERVED) + sorted(counts)
        self.token_to_id = {t: i for i, t in enumerate(self.id_to_token)}

    @classmethod
    def from_corpus(cls, corpus: Iterable[Sequence[str]], min_count: int = 1) -> "Vocabulary":
        """Count tokens; types rarer than min_count are dropped (their
        occurrences map to the unknown token)."""
        c: Counter = Counter()
        for tokens in corpus:
            c.update(tokens)
        return cls({t: n for t, n in c.items() if n >= min_count})

    def encode(self, tokens: Sequence[str]) -> List[int]:
        get = self.token_to_id.get
        return [get(t, UNK_ID) for t in tokens]

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def __len__(self) -> int:
        return len(self.id_to_token)

    @property
    def predicted_size(self) -> int:
        """Number of valid prediction targets: every id except BOS."""
        return len(self.id_to_token) - 1
