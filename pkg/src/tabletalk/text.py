"""Text normalization shared by the catalog lexicon and the query matcher.

The pipeline is deliberately tiny and versioned with the repo: lowercase,
strip punctuation, drop stop words, apply a fixed suffix stemmer. Corpus
tests pin its behavior; changing a rule here is a lexicon-breaking change.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_WORD_SPLIT = re.compile(r"[^a-z0-9]+")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    text = resources.files("tabletalk.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def stem(token: str) -> str:
    """Fixed suffix stripper: -ing, -es after sibilants, -ies, plural -s."""
    if token.isdigit():
        return token
    if token.endswith("ing") and len(token) >= 6:
        return token[:-3]
    if token.endswith(("ses", "xes", "zes", "ches", "shes")):
        return token[:-2]
    if token.endswith("ies") and len(token) >= 5:
        return token[:-3] + "y"
    if token.endswith("s") and not token.endswith("ss") and len(token) >= 4:
        return token[:-1]
    return token


def norm_tokens(text: str) -> list[str]:
    """Lowercased, punctuation-stripped, stop-word-free, stemmed tokens in order."""
    stops = stopwords()
    raw = (t for t in _WORD_SPLIT.split(text.lower()) if t)
    return [stem(t) for t in raw if t not in stops]


def norm_phrase(text: str) -> tuple[str, ...]:
    """Normalized token tuple for a lexicon phrase (synonym, trigger, label)."""
    return tuple(norm_tokens(text))
