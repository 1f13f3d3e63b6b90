"""Seeded corruption of fluent sentences into a graded test set.

Labels follow a 0-3 fluency scale: 3 untouched, 2 exactly one edit
(misspelling, missing word, or doubled word), 1 two independent edits or a
half-sentence scramble, 0 a full scramble.  All randomness comes from
Python's random.Random (Mersenne Twister) seeded per example with
base_seed + example_index, so any example regenerates from its recorded
spec alone.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .corpus import COMMENT_PREFIX, Sentence, read_lines, sentence_id
from .errors import DataError

GRADED_FORMAT_VERSION = "v1"

EDIT_OPS = ("misspell", "delete", "duplicate")
LABELS = (3, 2, 1, 0)
DEFAULT_PROPORTIONS = (0.4, 0.2, 0.2, 0.2)  # labels 3, 2, 1, 0

_MAX_SHUFFLE_TRIES = 100


@dataclass(frozen=True)
class CorruptionSpec:
    target_level: int
    operations: Tuple[str, ...]
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {"level": self.target_level, "operations": list(self.operations), "seed": self.seed},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "CorruptionSpec":
        d = json.loads(text)
        return cls(target_level=d["level"], operations=tuple(d["operations"]), seed=d["seed"])


@dataclass(frozen=True)
class GradedExample:
    sentence_id: str
    original_text: str
    corrupted_text: str
    label: int
    spec: Optional[CorruptionSpec]


# -- single corruption operations ------------------------------------------------


def misspell(tokens: Sequence[str], rng: random.Random) -> List[str]:
    """Alter exactly one token by an adjacent swap, a dropped character, or
    a doubled character; token count is unchanged and the token always
    differs from the original."""
    eligible = [i for i, t in enumerate(tokens) if len(t) >= 2]
    if not eligible:
        raise DataError("no token with at least 2 characters to misspell")
    i = rng.choice(eligible)
    t = tokens[i]
    swaps = [j for j in range(len(t) - 1) if t[j] != t[j + 1]]
    ops = (["swap"] if swaps else []) + ["drop", "double"]
    op = rng.choice(ops)
    if op == "swap":
        j = rng.choice(swaps)
        t = t[:j] + t[j + 1] + t[j] + t[j + 2 :]
    elif op == "drop":
        j = rng.randrange(len(t))
        t = t[:j] + t[j + 1 :]
    else:
        j = rng.randrange(len(t))
        t = t[: j + 1] + t[j] + t[j + 1 :]
    out = list(tokens)
    out[i] = t
    return out


def delete_word(tokens: Sequence[str], rng: random.Random, count: int = 1) -> List[str]:
    if count >= len(tokens):
        raise DataError(f"cannot delete {count} of {len(tokens)} tokens")
    drop = set(rng.sample(range(len(tokens)), count))
    return [t for i, t in enumerate(tokens) if i not in drop]


def duplicate_word(tokens: Sequence[str], rng: random.Random) -> List[str]:
    if not tokens:
        raise DataError("cannot duplicate a word in an empty sentence")
    i = rng.randrange(len(tokens))
    out = list(tokens)
    out.insert(i + 1, tokens[i])
    return out


def _permute_differently(block: List[str], rng: random.Random) -> List[str]:
    if len(set(block)) < 2:
        raise DataError("cannot scramble: tokens are all identical")
    for _ in range(_MAX_SHUFFLE_TRIES):
        shuffled = list(block)
        rng.shuffle(shuffled)
        if shuffled != block:
            return shuffled
    raise DataError("could not find a non-identity permutation")


def scramble(tokens: Sequence[str], rng: random.Random, scope: str = "full") -> List[str]:
    """scope='full' permutes the whole sentence (never the identity);
    scope='half' permutes one contiguous half and leaves the other intact."""
    if len(tokens) < 4:
        raise DataError(f"need at least 4 tokens to scramble, got {len(tokens)}")
    if scope == "full":
        return _permute_differently(list(tokens), rng)
    if scope != "half":
        raise ValueError(f"scope must be 'full' or 'half', got {scope!r}")
    half = len(tokens) // 2
    first = rng.random() < 0.5
    out = list(tokens)
    if first:
        out[:half] = _permute_differently(out[:half], rng)
    else:
        out[len(out) - half :] = _permute_differently(out[len(out) - half :], rng)
    return out


# -- graded generation -------------------------------------------------------------


def corrupt_tokens(tokens: Sequence[str], level: int, seed: int) -> Tuple[List[str], Tuple[str, ...]]:
    """Corrupt a token list down to a target level; pure in (tokens, level,
    seed).  Returns the corrupted tokens and the operation names applied.

    A corrupted sentence must differ from the original (only label 3 keeps
    the text intact); a double edit can cancel itself out (duplicate a word
    then delete the copy), so the draw repeats on the same stream until the
    result differs.
    """
    if level not in (0, 1, 2):
        raise ValueError(f"corruption level must be 0, 1, or 2, got {level}")
    rng = random.Random(seed)
    original = list(tokens)
    for _ in range(_MAX_SHUFFLE_TRIES):
        if level == 2:
            ops: Tuple[str, ...] = (rng.choice(EDIT_OPS),)
        elif level == 1:
            if rng.random() < 0.5:
                ops = (rng.choice(EDIT_OPS), rng.choice(EDIT_OPS))
            else:
                ops = ("scramble_half",)
        else:
            ops = ("scramble_full",)
        toks = original
        for op in ops:
            if op == "misspell":
                toks = misspell(toks, rng)
            elif op == "delete":
                toks = delete_word(toks, rng, count=1)
            elif op == "duplicate":
                toks = duplicate_word(toks, rng)
            elif op == "scramble_half":
                toks = scramble(toks, rng, scope="half")
            else:
                toks = scramble(toks, rng, scope="full")
        if toks != original:
            return toks, ops
    raise DataError("corruption kept reproducing the original sentence")


def apply_spec(original_text: str, spec: CorruptionSpec) -> str:
    """Regenerate a corrupted sentence from its original text and spec."""
    toks, ops = corrupt_tokens(original_text.split(), spec.target_level, spec.seed)
    if ops != spec.operations:
        raise DataError(f"spec mismatch: recorded {spec.operations}, derived {ops}")
    return " ".join(toks)


def _label_counts(total: int, proportions: Sequence[float]) -> List[int]:
    if len(proportions) != 4 or abs(sum(proportions) - 1.0) > 1e-9:
        raise ValueError(f"proportions must be 4 values summing to 1, got {proportions}")
    exact = [total * p for p in proportions]
    counts = [int(x) for x in exact]
    # largest remainders absorb the rounding shortfall
    order = sorted(range(4), key=lambda i: (counts[i] - exact[i], i))
    for i in range(total - sum(counts)):
        counts[order[i % 4]] += 1
    return counts


def build_graded_testset(
    fluent_sentences: Sequence[Sentence],
    total: int,
    proportions: Sequence[float] = DEFAULT_PROPORTIONS,
    seed: int = 0,
) -> List[GradedExample]:
    """Draw `total` fluent sources and corrupt them to the requested label
    mix (default 40/20/20/20 for labels 3/2/1/0)."""
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    if len(fluent_sentences) < total:
        raise DataError(f"insufficient sources: have {len(fluent_sentences)}, need {total}")
    counts = _label_counts(total, proportions)
    labels: List[int] = []
    for label, n in zip(LABELS, counts):
        labels.extend([label] * n)
    rng = random.Random(seed)
    chosen = rng.sample(list(fluent_sentences), total)
    rng.shuffle(labels)
    out: List[GradedExample] = []
    for idx, (src, label) in enumerate(zip(chosen, labels)):
        if label == 3:
            corrupted = src.text
            spec = None
        else:
            ex_seed = seed + idx
            toks, ops = corrupt_tokens(src.tokens, label, ex_seed)
            corrupted = " ".join(toks)
            spec = CorruptionSpec(target_level=label, operations=ops, seed=ex_seed)
        out.append(
            GradedExample(
                sentence_id=sentence_id(f"{idx}:{corrupted}"),
                original_text=src.text,
                corrupted_text=corrupted,
                label=label,
                spec=spec,
            )
        )
    return out


# -- graded set files ------------------------------------------------------------

_GRADED_COLUMNS = ("id", "label", "text", "spec")


def write_graded(path, examples: Iterable[GradedExample], header: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(COMMENT_PREFIX + header + "\n")
        fh.write("\t".join(_GRADED_COLUMNS) + "\n")
        for ex in examples:
            spec_json = ex.spec.to_json() if ex.spec is not None else ""
            fh.write(f"{ex.sentence_id}\t{ex.label}\t{ex.corrupted_text}\t{spec_json}\n")


def read_graded(path) -> List[GradedExample]:
    lines = read_lines(path)
    if not lines or lines[0] != "\t".join(_GRADED_COLUMNS):
        raise DataError(f"{path}: not a graded {GRADED_FORMAT_VERSION} file")
    out = []
    for ln in lines[1:]:
        sid, label, text, spec_json = ln.split("\t")
        out.append(
            GradedExample(
                sentence_id=sid,
                original_text="",
                corrupted_text=text,
                label=int(label),
                spec=CorruptionSpec.from_json(spec_json) if spec_json else None,
            )
        )
    return out
