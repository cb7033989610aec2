"""String similarity primitives used by the schema matcher.

All comparisons are case-insensitive.  ``sigma`` averages three component
scores (synonym/phonetic agreement, Levenshtein ratio, contiguous-substring
ratio), each in [0, 1]; higher means closer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import Vocabulary
from .errors import BothEmpty, EmptyFirstArgument

_SOUNDEX_CODES = {
    "b": "1", "f": "1", "p": "1", "v": "1",
    "c": "2", "g": "2", "j": "2", "k": "2", "q": "2", "s": "2", "x": "2", "z": "2",
    "d": "3", "t": "3",
    "l": "4",
    "m": "5", "n": "5",
    "r": "6",
}


@dataclass(frozen=True)
class SimilarityBreakdown:
    homo: float
    lam: float
    psi: float

    @property
    def sigma(self) -> float:
        return (self.homo + self.lam + self.psi) / 3.0


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance via the standard DP recurrence, case-insensitive."""
    a, b = a.lower(), b.lower()
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(
                prev[j] + 1,          # deletion
                cur[j - 1] + 1,       # insertion
                prev[j - 1] + (ca != cb),
            ))
        prev = cur
    return prev[-1]


def edit_distance_adjusted(a: str, b: str) -> int:
    """Zero when one string contains the other (covers equality and the empty
    string); plain edit distance otherwise."""
    la, lb = a.lower(), b.lower()
    if la in lb or lb in la:
        return 0
    return edit_distance(la, lb)


def lambda_sim(a: str, b: str) -> float:
    if not a and not b:
        raise BothEmpty("lambda_sim is undefined for two empty strings")
    longest = max(len(a), len(b))
    return (longest - edit_distance_adjusted(a, b)) / longest


def psi_sim(a: str, b: str) -> float:
    """Length of the longest contiguous substring of ``a`` found in ``b``,
    normalized by |a|."""
    if not a:
        raise EmptyFirstArgument("psi_sim requires a nonempty first argument")
    a, b = a.lower(), b.lower()
    best = 0
    for i in range(len(a)):
        # grow from the current best; shorter candidates cannot improve
        for j in range(i + best + 1, len(a) + 1):
            if a[i:j] in b:
                best = j - i
            else:
                break
    return best / len(a)


def soundex(word: str) -> str:
    """Classic 4-character Soundex code; empty input codes to ''."""
    word = "".join(ch for ch in word.lower() if ch.isalpha())
    if not word:
        return ""
    first = word[0].upper()
    digits = []
    prev = _SOUNDEX_CODES.get(word[0], "")
    for ch in word[1:]:
        code = _SOUNDEX_CODES.get(ch, "")
        if code and code != prev:
            digits.append(code)
        if ch not in "hw":  # h/w do not reset adjacency
            prev = code
    return (first + "".join(digits) + "000")[:4]


def homo_sim(a: str, b: str, vocabulary: Vocabulary | None = None,
             lemma_a: str | None = None, lemma_b: str | None = None) -> float:
    """1 when the terms are homonyms: equal lemmas, shared synonym group, or
    equal phonetic codes.  0 otherwise."""
    la = (lemma_a or a).lower()
    lb = (lemma_b or b).lower()
    if la == lb:
        return 1.0
    if vocabulary is not None:
        for x in (a.lower(), la):
            for y in (b.lower(), lb):
                if x == y or vocabulary.share_group(x, y):
                    return 1.0
    if a and b and soundex(a) == soundex(b) and soundex(a) != "":
        return 1.0
    return 0.0


def sigma(a: str, b: str, vocabulary: Vocabulary | None = None,
          lemma_a: str | None = None, lemma_b: str | None = None) -> SimilarityBreakdown:
    """Combined closeness of term ``a`` to schema name ``b``."""
    return SimilarityBreakdown(
        homo=homo_sim(a, b, vocabulary, lemma_a, lemma_b),
        lam=lambda_sim(a, b),
        psi=psi_sim(a, b),
    )
