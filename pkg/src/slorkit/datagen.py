"""Seeded synthetic corpus for fixtures and desk-scale experiments.

Sentences come from a tiny template grammar over pseudo-words built from
consonant-vowel syllables, with Zipf-like word choice inside each class.
The grammar gives the corpus strong local n-gram structure, so scrambling
a sentence measurably hurts a trained model's probability.  Everything is
driven by one random.Random(seed), so a given (n, seed) always yields the
same corpus.
"""

from __future__ import annotations

import random
from typing import Dict, List

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"

_CLASS_SIZES = {
    "det": 3,
    "adj": 30,
    "noun": 60,
    "verb": 40,
    "adv": 15,
    "prep": 8,
    "conj": 3,
}


def _make_words(rng: random.Random, n: int, taken: set) -> List[str]:
    words = []
    while len(words) < n:
        syllables = rng.choice((2, 2, 3))
        w = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(syllables))
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def _lexicon(rng: random.Random) -> Dict[str, List[str]]:
    taken: set = set()
    return {cls: _make_words(rng, size, taken) for cls, size in _CLASS_SIZES.items()}


def _pick(rng: random.Random, words: List[str]) -> str:
    # Zipf-ish: weight 1/(rank+1)
    weights = [1.0 / (i + 1) for i in range(len(words))]
    return rng.choices(words, weights=weights, k=1)[0]


def _noun_phrase(rng: random.Random, lex: Dict[str, List[str]]) -> List[str]:
    out = [_pick(rng, lex["det"])]
    if rng.random() < 0.5:
        out.append(_pick(rng, lex["adj"]))
    out.append(_pick(rng, lex["noun"]))
    if rng.random() < 0.3:
        out += [_pick(rng, lex["prep"]), _pick(rng, lex["det"]), _pick(rng, lex["noun"])]
    return out


def _verb_phrase(rng: random.Random, lex: Dict[str, List[str]]) -> List[str]:
    out = [_pick(rng, lex["verb"])]
    if rng.random() < 0.4:
        out.append(_pick(rng, lex["adv"]))
    if rng.random() < 0.7:
        out += _noun_phrase(rng, lex)
    return out


def _clause(rng: random.Random, lex: Dict[str, List[str]]) -> List[str]:
    return _noun_phrase(rng, lex) + _verb_phrase(rng, lex)


def generate_sentences(n: int, seed: int, min_tokens: int = 8, max_tokens: int = 25) -> List[str]:
    """n synthetic sentences with token counts in [min_tokens, max_tokens]."""
    rng = random.Random(seed)
    lex = _lexicon(rng)
    out: List[str] = []
    while len(out) < n:
        tokens = _clause(rng, lex)
        while len(tokens) < min_tokens:
            tokens += [_pick(rng, lex["conj"])] + _clause(rng, lex)
        if len(tokens) > max_tokens:
            continue
        out.append(" ".join(tokens))
    return out
