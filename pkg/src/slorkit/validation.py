"""Input validation helpers used by the estimators and the CLI."""

from __future__ import annotations

from typing import Iterable, List, Sequence

from sklearn.exceptions import NotFittedError

from .errors import DataError


def check_fitted(estimator, *attributes: str) -> None:
    """Raise NotFittedError unless every learned attribute is present."""
    missing = [a for a in attributes if getattr(estimator, a, None) is None]
    if missing:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit() first "
            f"(missing: {', '.join(missing)})"
        )


def check_token_list(tokens: Sequence[str]) -> List[str]:
    """Validate one sentence worth of tokens."""
    toks = list(tokens)
    if not toks:
        raise DataError("cannot score an empty token list")
    for t in toks:
        if not isinstance(t, str) or not t:
            raise DataError(f"invalid token {t!r}: tokens must be non-empty strings")
    return toks


def as_token_lists(corpus: Iterable) -> List[List[str]]:
    """Normalize a corpus into lists of tokens.

    Accepts an iterable of Sentence objects (anything with a .tokens
    attribute), pre-tokenized lists, or raw strings (split on whitespace).
    """
    out: List[List[str]] = []
    for item in corpus:
        if hasattr(item, "tokens"):
            out.append(list(item.tokens))
        elif isinstance(item, str):
            out.append(item.split())
        else:
            out.append(list(item))
    return out
