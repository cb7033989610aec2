"""English preprocessing: tokens, lemmas, coarse tags, compounds, quantities.

The pipeline is deliberately rule-based.  A small exception table plus ordered
suffix rules cover the lemmas the matcher needs; a lexicon of command verbs,
known verbs and prepositions provides coarse tags (everything else defaults to
noun).  No statistical tagging is involved, so the pipeline is deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import EmptyQuery

DATA_DIR = Path(__file__).parent / "data"

KIND_WORD = "word"
KIND_NUMBER = "number"
KIND_QUOTED = "quoted"
KIND_PUNCT = "punct"

# Coarse tags; "literal" covers quoted strings and named-entity compounds.
TAGS = ("noun", "verb", "adjective", "preposition", "stop", "literal", "other")

COMMAND_VERBS = {
    "show", "list", "print", "get", "output", "display", "give", "find",
    "tell", "fetch", "retrieve",
}

VERB_LEMMAS = COMMAND_VERBS | {
    "be", "have", "do", "compose", "record", "distribute", "chart", "sell",
    "rank", "sing", "play", "make", "write", "say", "run", "sit", "eat",
    "go", "come", "want", "need", "see", "know", "take", "use", "ask",
}

PREPOSITIONS = {
    "in", "on", "of", "by", "from", "with", "under", "for", "at", "to",
    "over", "into", "between", "about",
}

ADJECTIVES = {"differ", "top", "new", "old", "high", "low", "good", "bad"}

QUANTIFIERS = {"all", "every", "each", "any"}

WORD_NUMBERS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20,
}

SCALE_WORDS = {"hundred": 100, "thousand": 1_000, "million": 1_000_000, "billion": 1_000_000_000}

# Lowercase words allowed to bridge two capitalized words inside one entity
# ("Gone is Gone"); prepositions like "in" deliberately break the run.
ENTITY_BRIDGES = {"is", "of"}

VOWELS = set("aeiou")

_TOKEN_RE = re.compile(
    r"""
    '(?P<squote>[^']*)'            |
    "(?P<dquote>[^"]*)"            |
    (?P<number>\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?) |
    (?P<word>[A-Za-z]+(?:'[A-Za-z]+)?) |
    (?P<punct>[^\sA-Za-z0-9])
    """,
    re.VERBOSE,
)

_WAKE_RE = re.compile(r"^\s*[Hh]ey\s+[A-Z][A-Za-z]*\s*,\s*")


@dataclass
class Token:
    surface: str
    lemma: str
    position: int           # 1-based index of the first source token
    kind: str
    tag: str = "other"
    numeric_value: int | float | None = None
    start: int = 0          # char offset into the original text
    end_position: int = 0   # last source-token index covered (merges widen this)
    entity: bool = False    # named-entity compound or quoted literal

    def __post_init__(self):
        if not self.end_position:
            self.end_position = self.position

    @property
    def is_stop(self) -> bool:
        return self.tag == "stop"

    @property
    def is_content(self) -> bool:
        return self.kind != KIND_PUNCT and self.tag != "stop"


@dataclass
class TaggedQuery:
    original: str
    tokens: list[Token]
    compounds: list[tuple[int, int]] = field(default_factory=list)

    def content_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.is_content]


def strip_wake_phrase(text: str) -> str:
    """Drop a leading vocative like "Hey Ada," before tokenizing."""
    return _WAKE_RE.sub("", text, count=1)


def tokenize(text: str) -> list[Token]:
    if not text or not text.strip():
        raise EmptyQuery("query text is empty")
    tokens: list[Token] = []
    pos = 0
    for m in _TOKEN_RE.finditer(text):
        pos += 1
        if m.group("squote") is not None or m.group("dquote") is not None:
            inner = m.group("squote") if m.group("squote") is not None else m.group("dquote")
            tokens.append(
                Token(inner, inner.lower(), pos, KIND_QUOTED, tag="literal",
                      start=m.start(), entity=True)
            )
        elif m.group("number") is not None:
            raw = m.group("number")
            cleaned = raw.replace(",", "")
            value: int | float = float(cleaned) if "." in cleaned else int(cleaned)
            tokens.append(
                Token(raw, cleaned, pos, KIND_NUMBER, tag="literal",
                      numeric_value=value, start=m.start())
            )
        elif m.group("word") is not None:
            w = m.group("word")
            tokens.append(Token(w, w.lower(), pos, KIND_WORD, start=m.start()))
        else:
            p = m.group("punct")
            tokens.append(Token(p, p, pos, KIND_PUNCT, tag="other", start=m.start()))
    if not tokens:
        raise EmptyQuery("query text contains no tokens")
    return tokens


class Lemmatizer:
    """Exception table first, then ordered suffix rules.  Idempotent."""

    def __init__(self, exceptions: dict[str, str] | None = None):
        self.exceptions = dict(exceptions or {})

    @classmethod
    def from_file(cls, path: Path) -> "Lemmatizer":
        exceptions = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, lemma = line.split("\t")
            exceptions[word.lower()] = lemma.lower()
        return cls(exceptions)

    def lemma(self, word: str) -> str:
        w = word.lower()
        # possessives and contractions
        for suf in ("'s", "'ve", "'d", "'ll", "'re", "'m", "'"):
            if w.endswith(suf):
                w = w[: -len(suf)]
                break
        if w in self.exceptions:
            return self.exceptions[w]
        out = self._suffix_rules(w)
        return self.exceptions.get(out, out)

    def _suffix_rules(self, w: str) -> str:
        if len(w) <= 3:
            return w
        if w.endswith("ies"):
            return w[:-3] + "y"
        if w.endswith("s") and not w.endswith(("ss", "us", "is")):
            return w[:-1]
        if w.endswith("ing") and len(w) > 5:
            return self._restore_stem(w[:-3])
        if w.endswith("ed") and len(w) > 4:
            return self._restore_stem(w[:-2])
        if w.endswith("ly") and len(w) > 4:
            return w[:-2]
        return w

    @staticmethod
    def _restore_stem(stem: str) -> str:
        # "runn" -> "run"; "compos" -> "compose" (consonant-vowel-consonant)
        if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in VOWELS:
            return stem[:-1]
        if (
            len(stem) >= 3
            and stem[-1] not in VOWELS
            and stem[-2] in VOWELS
            and stem[-3] not in VOWELS
            and stem[-1] not in "wxy"
        ):
            return stem + "e"
        return stem

    def lemmatize(self, token: Token) -> Token:
        if token.kind != KIND_WORD:
            return token
        return replace(token, lemma=self.lemma(token.surface))


def tag_tokens(tokens: list[Token]) -> list[Token]:
    out = []
    for tok in tokens:
        if tok.kind != KIND_WORD or tok.entity:
            out.append(tok)
            continue
        lemma = tok.lemma
        if lemma in VERB_LEMMAS:
            tag = "verb"
        elif lemma in PREPOSITIONS:
            tag = "preposition"
        elif lemma in ADJECTIVES:
            tag = "adjective"
        else:
            tag = "noun"
        out.append(replace(tok, tag=tag))
    return out


def _sentence_initial(tokens: list[Token], i: int) -> bool:
    for j in range(i - 1, -1, -1):
        if tokens[j].kind == KIND_PUNCT:
            if tokens[j].surface in ".?!":
                return True
            continue
        return False
    return True


def join_compounds(tokens: list[Token], stop_lemmas: set[str] | None = None) -> list[Token]:
    """Merge maximal runs of adjacent capitalized words into entity tokens.

    A short lowercase bridge word is allowed between capitalized words so that
    names like "Gone is Gone" stay in one piece.  Sentence-initial capitals and
    capitalized stop words ("I've") never start an entity.
    """
    stop_lemmas = stop_lemmas or set()
    out: list[Token] = []
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if (
            tok.kind == KIND_WORD
            and not tok.entity
            and tok.surface[0].isupper()
            and tok.lemma not in stop_lemmas
            and not _sentence_initial(tokens, i)
        ):
            span = [tok]
            j = i + 1
            while j < n:
                nxt = tokens[j]
                if nxt.kind == KIND_WORD and nxt.surface[0].isupper() and nxt.lemma not in stop_lemmas:
                    span.append(nxt)
                    j += 1
                elif (
                    nxt.kind == KIND_WORD
                    and nxt.surface.lower() in ENTITY_BRIDGES
                    and j + 1 < n
                    and tokens[j + 1].kind == KIND_WORD
                    and tokens[j + 1].surface[0].isupper()
                ):
                    span.append(nxt)
                    span.append(tokens[j + 1])
                    j += 2
                else:
                    break
            surface = " ".join(t.surface for t in span)
            out.append(
                Token(surface, surface.lower(), span[0].position, KIND_WORD,
                      tag="literal", start=span[0].start,
                      end_position=span[-1].position, entity=True)
            )
            i = j
        else:
            out.append(tok)
            i += 1
    return out


def parse_quantity(tokens: list[Token]) -> list[Token]:
    """Collapse "2 million" into one number token; spell out small numbers."""
    converted = []
    for tok in tokens:
        if tok.kind == KIND_WORD and not tok.entity and tok.lemma in WORD_NUMBERS:
            converted.append(
                replace(tok, kind=KIND_NUMBER, tag="literal",
                        numeric_value=WORD_NUMBERS[tok.lemma])
            )
        else:
            converted.append(tok)
    out: list[Token] = []
    i = 0
    while i < len(converted):
        tok = converted[i]
        if tok.kind == KIND_NUMBER and i + 1 < len(converted):
            nxt = converted[i + 1]
            if nxt.kind == KIND_WORD and nxt.lemma in SCALE_WORDS:
                value = tok.numeric_value * SCALE_WORDS[nxt.lemma]
                if isinstance(value, float) and value.is_integer():
                    value = int(value)
                out.append(
                    replace(tok, surface=f"{tok.surface} {nxt.surface}",
                            lemma=str(value), numeric_value=value,
                            end_position=nxt.end_position)
                )
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def mark_stop_words(tokens: list[Token], stop_lemmas: set[str]) -> list[Token]:
    out = []
    for tok in tokens:
        if tok.kind == KIND_WORD and not tok.entity and tok.lemma in stop_lemmas:
            out.append(replace(tok, tag="stop"))
        else:
            out.append(tok)
    return out


def load_stop_words(path: Path) -> set[str]:
    return {
        line.strip().lower()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    }


class TextPipeline:
    """Bundles the config files and runs the whole token pipeline."""

    def __init__(self, stop_words: set[str] | None = None, lemmatizer: Lemmatizer | None = None):
        self.stop_words = stop_words if stop_words is not None else load_stop_words(
            DATA_DIR / "stopwords.txt"
        )
        self.lemmatizer = lemmatizer or Lemmatizer.from_file(DATA_DIR / "lemma_exceptions.txt")

    def process(self, text: str) -> TaggedQuery:
        stripped = strip_wake_phrase(text)
        tokens = tokenize(stripped if stripped.strip() else text)
        tokens = [self.lemmatizer.lemmatize(t) for t in tokens]
        tokens = tag_tokens(tokens)
        tokens = join_compounds(tokens, self.stop_words)
        tokens = parse_quantity(tokens)
        tokens = mark_stop_words(tokens, self.stop_words)
        compounds = [
            (t.position, t.end_position) for t in tokens if t.end_position > t.position
        ]
        return TaggedQuery(original=text, tokens=tokens, compounds=compounds)
