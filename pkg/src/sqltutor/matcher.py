"""Schema linking: maps query terms to table and column names.

The pipeline: collect candidate terms from the tagged query, score them
against table names with ``sigma``, pick tables whose combined score clears a
relative margin, and assign the remaining terms to columns one-to-one with a
term-proposing deferred-acceptance (stable marriage) matching.  Tables that
only become necessary through column or literal bindings are pulled in later
by the SQL generator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .catalog import DatabaseCatalog, TableSchema, Vocabulary
from .errors import NoTableMatch
from .similarity import SimilarityBreakdown, sigma
from .textpipe import (
    COMMAND_VERBS,
    KIND_NUMBER,
    KIND_QUOTED,
    KIND_WORD,
    Lemmatizer,
    TaggedQuery,
    Token,
)

_STRIP_RE = re.compile(r"[\s_\-]+")

_lemmatizer = Lemmatizer()


def strip_name(name: str) -> str:
    """Lowercase and drop delimiters so "Media_Type" and "media type" agree."""
    return _STRIP_RE.sub("", name.lower())


@dataclass(frozen=True)
class MatcherConfig:
    delta: float = 0.2       # relative margin for "much greater" comparisons
    tau: float = 0.5         # floor for table-name matches
    attr_floor: float = 0.35  # floor for term-to-column matches

    def __post_init__(self):
        if not (0 < self.tau <= 1):
            raise ValueError("tau must be in (0, 1]")
        if not (0 <= self.delta < 1):
            raise ValueError("delta must be in [0, 1)")


@dataclass(frozen=True)
class Term:
    """A matchable unit: a single token, an entity compound, or an adjacent
    word pair that jointly names one column."""
    surface: str
    lemma: str
    key: str                  # stripped lowercase form used for comparisons
    position: int
    end_position: int
    tag: str
    is_entity: bool = False
    is_number: bool = False
    quoted: bool = False      # explicitly quoted in the source text
    numeric_value: int | float | None = None
    column_hint: str | None = None  # set for merged pairs that named a column

    @classmethod
    def from_token(cls, tok: Token) -> "Term":
        return cls(
            surface=tok.surface,
            lemma=tok.lemma,
            key=strip_name(tok.lemma if tok.kind == KIND_WORD and not tok.entity else tok.surface)
            or tok.surface.lower(),
            position=tok.position,
            end_position=tok.end_position,
            tag=tok.tag,
            is_entity=tok.entity,
            is_number=tok.kind == KIND_NUMBER,
            quoted=tok.kind == KIND_QUOTED,
            numeric_value=tok.numeric_value,
        )


@dataclass
class ScoredPair:
    term: Term
    table: str
    breakdown: SimilarityBreakdown

    @property
    def sigma(self) -> float:
        return self.breakdown.sigma


@dataclass
class MatchResult:
    t_n: list[Term]
    t_p: list[Term]
    t_c: list[Term]
    t_d: list[str]
    l_t: list[ScoredPair]
    mu: dict[Term, tuple[str, float]]       # term -> (column name, sigma)
    unmatched: list[Term]                   # the set A
    penalty: float
    psi_table: dict[str, float]
    f_t: list[tuple[str, list[Term]]]       # (table, bound attribute terms)


def term_sigma(term: Term, name: str, vocabulary: Vocabulary) -> SimilarityBreakdown:
    """Similarity of a query term to a schema name.

    A term whose vocabulary synonym exactly equals the name is a full match,
    so "songs" reaches table "tracks" at score 1.0; otherwise the composite
    string similarity of the term itself decides.
    """
    name_key = strip_name(name)
    lemma_key = strip_name(term.lemma)
    if not term.is_entity and not term.is_number:
        synonyms = vocabulary.synonyms_of(term.key) | vocabulary.synonyms_of(lemma_key)
        if any(strip_name(s) == name_key for s in synonyms):
            return SimilarityBreakdown(homo=1.0, lam=1.0, psi=1.0)
    return sigma(
        term.key, name_key, vocabulary,
        lemma_a=lemma_key,
        lemma_b=_lemmatizer.lemma(name_key),
    )


def merge_column_pairs(terms: list[Term], catalog: DatabaseCatalog) -> list[Term]:
    """Join adjacent noun pairs whose concatenation names a column, so that
    "track id" competes as one term against column "TrackId"."""
    column_keys = {
        strip_name(c.name): c.name
        for t in catalog.tables
        for c in t.schema.columns
    }
    out: list[Term] = []
    i = 0
    while i < len(terms):
        cur = terms[i]
        merged = None
        if (
            i + 1 < len(terms)
            and cur.tag == "noun" and terms[i + 1].tag == "noun"
            and not cur.is_entity and not terms[i + 1].is_entity
            and not cur.is_number and not terms[i + 1].is_number
            and terms[i + 1].position == cur.end_position + 1  # no gap, no punctuation
        ):
            nxt = terms[i + 1]
            key = cur.key + nxt.key
            for col_key, col_name in column_keys.items():
                if key == col_key or col_key in key:
                    merged = Term(
                        surface=f"{cur.surface} {nxt.surface}",
                        lemma=f"{cur.lemma} {nxt.lemma}",
                        key=key,
                        position=cur.position,
                        end_position=nxt.end_position,
                        tag="noun",
                        column_hint=col_name,
                    )
                    break
        if merged is not None:
            out.append(merged)
            i += 2
        else:
            out.append(cur)
            i += 1
    return out


def candidate_terms(
    q: TaggedQuery, catalog: DatabaseCatalog, config: MatcherConfig = MatcherConfig()
) -> tuple[list[Term], list[Term]]:
    """Returns (T_n, T_p): table-name candidates and all content terms."""
    t_p = merge_column_pairs([Term.from_token(t) for t in q.content_tokens()], catalog)
    vocab = catalog.vocabulary
    t_n = []
    for term in t_p:
        if term.is_number:
            continue
        best = max(
            (term_sigma(term, name, vocab).sigma for name in catalog.table_names()),
            default=0.0,
        )
        if term.tag in ("noun", "literal") or term.is_entity:
            # imperative command verbs are never entity candidates
            if term.lemma in COMMAND_VERBS and best < config.tau:
                continue
            t_n.append(term)
        elif best >= config.tau:
            # verbs like "charted" that closely name a table still count
            t_n.append(term)
    return t_n, t_p


def score_tables(
    t_n: list[Term], catalog: DatabaseCatalog, config: MatcherConfig = MatcherConfig()
) -> tuple[list[ScoredPair], list[Term], list[str]]:
    """Score every candidate term against every table name.

    Returns (L_t, T_c, T_d): the surviving triples, the terms that matched
    anything at all, and the matched table names.
    """
    vocab = catalog.vocabulary
    all_pairs = [
        ScoredPair(term, t.schema.name, term_sigma(term, t.schema.name, vocab))
        for term in t_n
        for t in catalog.tables
    ]
    best = max((p.sigma for p in all_pairs), default=0.0)
    l_t = [
        p for p in all_pairs
        if p.sigma >= config.tau and p.sigma >= (1 - config.delta) * best
    ]
    best_per_term: dict[Term, float] = {}
    for p in all_pairs:
        best_per_term[p.term] = max(best_per_term.get(p.term, 0.0), p.sigma)
    t_c = [t for t in t_n if best_per_term.get(t, 0.0) >= config.attr_floor]
    t_d = sorted({p.table for p in l_t})
    return l_t, t_c, t_d


def stable_match(
    terms: list[Term],
    columns: list[str],
    vocabulary: Vocabulary,
    config: MatcherConfig = MatcherConfig(),
) -> tuple[dict[Term, tuple[str, float]], list[Term]]:
    """One-to-one term-to-column assignment by deferred acceptance.

    Terms propose in descending sigma order; a column accepts its best
    proposer so far.  Pairs scoring under the attribute floor are never
    formed.  Ties break by column declaration order, then term position,
    keeping the outcome deterministic.
    """
    scores: dict[tuple[int, int], float] = {}
    for i, term in enumerate(terms):
        for j, col in enumerate(columns):
            scores[(i, j)] = term_sigma(term, col, vocabulary).sigma

    # preference lists: strictly the pairs above the floor
    prefs = {
        i: sorted(
            (j for j in range(len(columns)) if scores[(i, j)] >= config.attr_floor),
            key=lambda j: (-scores[(i, j)], j),
        )
        for i in range(len(terms))
    }
    next_choice = {i: 0 for i in range(len(terms))}
    engaged: dict[int, int] = {}  # column index -> term index
    free = list(range(len(terms)))
    while free:
        i = free.pop(0)
        while next_choice[i] < len(prefs[i]):
            j = prefs[i][next_choice[i]]
            next_choice[i] += 1
            holder = engaged.get(j)
            if holder is None:
                engaged[j] = i
                break
            # column prefers the higher sigma; ties keep the earlier term
            if scores[(i, j)] > scores[(holder, j)]:
                engaged[j] = i
                free.append(holder)
                break
        # ran out of acceptable columns: term stays unmatched

    mu: dict[Term, tuple[str, float]] = {}
    matched_idx = set()
    for j, i in engaged.items():
        mu[terms[i]] = (columns[j], scores[(i, j)])
        matched_idx.add(i)
    unmatched = [t for i, t in enumerate(terms) if i not in matched_idx]
    return mu, unmatched


def penalty(unmatched: list[Term], t_p: list[Term]) -> float:
    # denominator guarded: the formula is undefined for single-term queries
    return len(unmatched) / max(1, len(t_p) - 1)


def attribute_candidates(t_p: list[Term], table_terms: set[Term]) -> list[Term]:
    """Terms eligible for column matching: content terms that are not numbers,
    not entity constants, and not already consumed as table references."""
    return [
        t for t in t_p
        if not t.is_number and not t.is_entity and t not in table_terms
    ]


def table_score(
    pair: ScoredPair,
    t_p: list[Term],
    catalog: DatabaseCatalog,
    config: MatcherConfig = MatcherConfig(),
    table_terms: set[Term] | None = None,
) -> tuple[float, dict[Term, tuple[str, float]], list[Term]]:
    """Psi score of a (term, table) pair: its own sigma, plus the stable-match
    scores of the other terms against the table's columns, minus the penalty
    for terms left unmatched."""
    instance = catalog.table(pair.table)
    candidates = [
        t for t in attribute_candidates(t_p, table_terms or set()) if t is not pair.term
    ]
    mu, unmatched = stable_match(
        candidates, instance.schema.column_names(), catalog.vocabulary, config
    )
    psi = pair.sigma + sum(s for _, s in mu.values()) - penalty(unmatched, t_p)
    return psi, mu, unmatched


def select_tables(
    l_t: list[ScoredPair],
    psi_scores: dict[str, float],
    config: MatcherConfig = MatcherConfig(),
) -> list[str]:
    """Keep, per distinct table, the max-psi entry; retain every table whose
    psi clears the relative margin against the best one."""
    if not l_t:
        raise NoTableMatch()
    best = max(psi_scores.values())
    threshold = best - abs(best) * config.delta
    return [t for t, score in psi_scores.items() if score >= threshold]


def match(
    q: TaggedQuery, catalog: DatabaseCatalog, config: MatcherConfig = MatcherConfig()
) -> MatchResult:
    """Full matching pass.  ``f_t`` holds only tables with direct name
    evidence; the generator may pull in more via column/literal bindings and
    then rebinds attributes with ``bind_attributes``."""
    t_n, t_p = candidate_terms(q, catalog, config)
    l_t, t_c, t_d = score_tables(t_n, catalog, config)

    table_terms = {p.term for p in l_t}
    psi_scores: dict[str, float] = {}
    best_pair: dict[str, ScoredPair] = {}
    for p in l_t:
        psi, _, _ = table_score(p, t_p, catalog, config, table_terms)
        if p.table not in psi_scores or psi > psi_scores[p.table]:
            psi_scores[p.table] = psi
            best_pair[p.table] = p

    if l_t:
        selected = select_tables(l_t, psi_scores, config)
    else:
        selected = []

    mu, unmatched, f_t = bind_attributes(t_p, selected, catalog, table_terms, config)
    return MatchResult(
        t_n=t_n, t_p=t_p, t_c=t_c, t_d=t_d, l_t=l_t,
        mu=mu, unmatched=unmatched,
        penalty=penalty(unmatched, t_p),
        psi_table=psi_scores, f_t=f_t,
    )


def bind_attributes(
    t_p: list[Term],
    tables: list[str],
    catalog: DatabaseCatalog,
    table_terms: set[Term],
    config: MatcherConfig = MatcherConfig(),
) -> tuple[dict[Term, tuple[str, float]], list[Term], list[tuple[str, list[Term]]]]:
    """Stable-match attribute candidates against the union of the selected
    tables' columns and group the bindings per table."""
    col_owner: dict[str, str] = {}
    columns: list[str] = []
    for name in tables:
        for col in catalog.table(name).schema.column_names():
            if col not in col_owner:
                col_owner[col] = name
                columns.append(col)
    candidates = attribute_candidates(t_p, table_terms)
    mu, unmatched = stable_match(candidates, columns, catalog.vocabulary, config)
    bound: dict[str, list[Term]] = {name: [] for name in tables}
    for term, (col, _) in mu.items():
        bound[col_owner[col]].append(term)
    f_t = [(name, sorted(bound[name], key=lambda t: t.position)) for name in tables]
    return mu, unmatched, f_t
