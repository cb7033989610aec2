"""Builds SQL ASTs from matched English queries.

Classification and construction are heuristic: quantifier plus a repeated
verb signals a division query, a quantity comparison signals an aggregate,
multiple matched tables make a join, bound literals a selection, bound
attribute terms a projection, and a bare table reference a wildcard.

Literal binding policy: a literal needs an adjacent cue word naming a
compatible column.  Uncued numbers fall back to a value scan over numeric
columns; uncued entity compounds inferred from capitalization are treated as
row context and dropped (quoted literals are explicit, so for them the scan
applies and ambiguity is an error).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import DatabaseCatalog
from .errors import AmbiguousLiteral, NoTableMatch, UnboundLiteral
from .matcher import (
    MatchResult,
    MatcherConfig,
    Term,
    bind_attributes,
    match,
    strip_name,
    term_sigma,
)
from .sqlast import (
    AggregateExpr,
    ColumnRef,
    Comparison,
    Contains,
    Having,
    Query,
    TableRef,
)
from .textpipe import COMMAND_VERBS, TaggedQuery

QUERY_CLASSES = ("wildcard", "projection", "selection", "join", "division", "aggregate")

DIVISION_QUANTIFIERS = {"all", "every"}

AUXILIARY_VERBS = {"be", "have", "do"}

# comparison phrases -> SQL comparator (token lemma sequences)
COMPARISON_PHRASES = {
    ("more", "than"): ">",
    ("greater", "than"): ">",
    ("over",): ">",
    ("less", "than"): "<",
    ("fewer", "than"): "<",
    ("at", "least"): ">=",
    ("at", "most"): "<=",
}

AGG_WORDS = {"average": "AVG", "avg": "AVG", "total": "SUM", "sum": "SUM"}

TUPLE_ALIAS = "t"


@dataclass
class BoundPredicate:
    column: str          # display name
    table: str
    op: str
    value: object
    cue: Term | None = None
    literal: Term | None = None


@dataclass
class Translation:
    ast: Query
    query_class: str
    match_result: MatchResult
    predicates: list[BoundPredicate] = field(default_factory=list)
    dropped_context: list[Term] = field(default_factory=list)

    def diagnostics(self) -> dict:
        m = self.match_result
        return {
            "candidate_terms": [t.surface for t in m.t_n],
            "all_terms": [t.surface for t in m.t_p],
            "table_triples": [
                {"term": p.term.surface, "table": p.table, "sigma": round(p.sigma, 4)}
                for p in m.l_t
            ],
            "psi_scores": {t: round(s, 4) for t, s in m.psi_table.items()},
            "selected_tables": [t for t, _ in m.f_t],
            "query_class": self.query_class,
            "bound_predicates": [
                {"column": p.column, "op": p.op, "value": p.value} for p in self.predicates
            ],
            "dropped_context": [t.surface for t in self.dropped_context],
        }


class Translator:
    def __init__(self, catalog: DatabaseCatalog, config: MatcherConfig = MatcherConfig()):
        self.catalog = catalog
        self.config = config
        # column lookup: stripped key -> (display, table, dtype)
        self.columns: list[tuple[str, str, str]] = []
        for inst in catalog.tables:
            for col in inst.schema.columns:
                self.columns.append((col.name, inst.schema.name, col.dtype))

    # --- column helpers ---

    def _column_values(self, table: str, column: str):
        inst = self.catalog.table(table)
        idx = [c.name.lower() for c in inst.schema.columns].index(column.lower())
        return [r[idx] for r in inst.rows if r[idx] is not None]

    def _best_column(self, term: Term, floor: float | None = None,
                     tables: list[str] | None = None) -> tuple[str, str, float] | None:
        """Best (column, table, sigma) for a term, across all or given tables."""
        floor = self.config.attr_floor if floor is None else floor
        best = None
        for col, table, _ in self.columns:
            if tables is not None and table not in tables:
                continue
            s = term_sigma(term, col, self.catalog.vocabulary).sigma
            if s >= floor and (best is None or s > best[2]):
                best = (col, table, s)
        return best

    def _columns_containing(self, value, numeric: bool) -> list[tuple[str, str]]:
        """Distinct (column, table) pairs whose data holds the value; numeric
        literals only scan numeric columns."""
        hits: dict[str, tuple[str, str]] = {}
        for col, table, dtype in self.columns:
            if numeric != (dtype in ("integer", "real")):
                continue
            for v in self._column_values(table, col):
                if (numeric and float(v) == float(value)) or (not numeric and v == value):
                    hits.setdefault(col.lower(), (col, table))
                    break
        return list(hits.values())

    # --- cue search ---

    def _cue_for(self, literal: Term, terms: list[Term], consumed: set[int]) -> tuple[Term, str, str] | None:
        """Find an adjacent content term naming a column compatible with the
        literal; returns (cue term, column, table)."""
        idx = terms.index(literal)
        neighbors = []
        for j in range(idx - 1, -1, -1):
            t = terms[j]
            if not t.is_number and not t.is_entity and t.tag != "preposition":
                neighbors.append(t)
                break
        for j in range(idx + 1, len(terms)):
            t = terms[j]
            if not t.is_number and not t.is_entity and t.tag != "preposition":
                neighbors.append(t)
                break
        candidates = []
        for cue in neighbors:
            if id(cue) in consumed or cue.lemma in COMMAND_VERBS:
                continue
            best = self._best_column(cue)
            if best is None:
                continue
            col, table, s = best
            if self._cue_compatible(col, table, literal, hinted=cue.column_hint is not None):
                candidates.append((s, cue, col, table))
        if not candidates:
            return None
        candidates.sort(key=lambda c: -c[0])
        _, cue, col, table = candidates[0]
        return cue, col, table

    def _cue_compatible(self, col: str, table: str, literal: Term, hinted: bool = False) -> bool:
        """A cue is compatible when the column's type fits the literal and the
        binding is plausible: either the cue named the column outright (a
        merged pair like "track id") or the column's data holds the value."""
        dtype = self._dtype(table, col)
        if literal.is_number:
            if dtype not in ("integer", "real"):
                return False
            return hinted or any(
                float(v) == float(literal.numeric_value)
                for v in self._column_values(table, col)
            )
        if dtype != "text":
            return False
        return literal.surface in self._column_values(table, col)

    def _dtype(self, table: str, col: str) -> str:
        for c in self.catalog.table(table).schema.columns:
            if c.name.lower() == col.lower():
                return c.dtype
        raise KeyError(col)

    # --- division ---

    def _detect_division(self, q: TaggedQuery, t_p: list[Term]) -> dict | None:
        lemmas = [t.lemma for t in q.tokens]
        if not any(l in DIVISION_QUANTIFIERS for l in lemmas):
            return None
        verb_counts: dict[str, int] = {}
        for tok in q.tokens:
            if tok.tag == "verb" and tok.lemma not in AUXILIARY_VERBS and tok.lemma not in COMMAND_VERBS:
                verb_counts[tok.lemma] = verb_counts.get(tok.lemma, 0) + 1
        if not any(c >= 2 for c in verb_counts.values()):
            return None
        entities = [t for t in t_p if t.is_entity]
        if not entities:
            return None
        # the quantified column: a noun shortly after the last quantifier
        division_col = None
        for i, tok in enumerate(q.tokens):
            if tok.lemma in DIVISION_QUANTIFIERS:
                for nxt in q.tokens[i + 1 : i + 4]:
                    if nxt.is_content and nxt.tag == "noun":
                        best = self._best_column(Term.from_token(nxt))
                        if best:
                            division_col = best
                        break
        if division_col is None:
            return None
        return {"entity": entities[-1], "division": division_col}

    def _build_division(self, q: TaggedQuery, m: MatchResult, info: dict) -> Query:
        entity = info["entity"]
        div_col, div_table, _ = info["division"]

        # correlate column: cue if present, else the unique column holding the entity
        cue = self._cue_for(entity, m.t_p, set())
        if cue is not None:
            corr_col, corr_table = cue[1], cue[2]
        else:
            hits = [
                (c, t) for c, t in self._columns_containing(entity.surface, numeric=False)
            ]
            if not hits:
                raise UnboundLiteral(f"no column holds the value {entity.surface!r}")
            corr_col, corr_table = hits[0]

        # outer subject: the first noun term that binds a column
        subject_col = None
        for term in m.t_p:
            if term.tag == "noun" and not term.is_entity and not term.is_number:
                best = self._best_column(term)
                if best:
                    subject_col = best[0]
                    break
        if subject_col is None:
            subject_col = corr_col

        table = self._table_covering([subject_col, div_col, corr_col]) or corr_table

        inner_correlated = Query(
            from_tables=(TableRef(table),),
            select_items=(ColumnRef(div_col),),
            where=(Comparison(ColumnRef(corr_col), "=",
                              ColumnRef(corr_col, qualifier=TUPLE_ALIAS)),),
        )
        inner_constant = Query(
            from_tables=(TableRef(table),),
            select_items=(ColumnRef(div_col),),
            where=(Comparison(ColumnRef(corr_col), "=", entity.surface),),
        )
        return Query(
            from_tables=(TableRef(table, alias=TUPLE_ALIAS),),
            select_items=(ColumnRef(subject_col),),
            where=(Contains(inner_correlated, inner_constant),),
        )

    def _table_covering(self, columns: list[str]) -> str | None:
        wanted = {c.lower() for c in columns}
        for inst in self.catalog.tables:
            names = {c.name.lower() for c in inst.schema.columns}
            if wanted <= names:
                return inst.schema.name
        return None

    # --- aggregates ---

    def _detect_comparison(self, q: TaggedQuery) -> tuple[str, Term, int] | None:
        """Find a comparison phrase followed by a number; returns
        (comparator, number token position index)."""
        lemmas = [t.lemma for t in q.tokens]
        for phrase, op in COMPARISON_PHRASES.items():
            for i in range(len(lemmas) - len(phrase)):
                if tuple(lemmas[i : i + len(phrase)]) == phrase:
                    for j in range(i + len(phrase), min(i + len(phrase) + 2, len(q.tokens))):
                        tok = q.tokens[j]
                        if tok.numeric_value is not None:
                            return op, tok, j
        return None

    def _numeric_column_near(self, number_term: Term, t_p: list[Term],
                             exclude: set[int]) -> tuple[Term, str, str, float] | None:
        best = None
        for term in t_p:
            if term.is_number or term.is_entity or id(term) in exclude:
                continue
            if abs(term.position - number_term.position) > 4:
                continue
            for col, table, dtype in self.columns:
                if dtype not in ("integer", "real"):
                    continue
                s = term_sigma(term, col, self.catalog.vocabulary).sigma
                if s >= self.config.attr_floor and (best is None or s > best[3]):
                    best = (term, col, table, s)
        return best

    # --- main entry ---

    def translate(self, q: TaggedQuery) -> Translation:
        m = match(q, self.catalog, self.config)
        t_p = m.t_p
        table_terms = {p.term for p in m.l_t}
        # consumed: excluded from projection and attribute binding.
        # cue_blocked: unavailable as literal cues.  Table terms are consumed
        # but still cue ("distributed by Redeye Distribution").
        consumed: set[int] = {id(t) for t in table_terms}
        cue_blocked: set[int] = set()
        tables: list[str] = [t for t, _ in m.f_t]
        predicates: list[BoundPredicate] = []
        dropped: list[Term] = []

        division = self._detect_division(q, t_p)
        if division is not None:
            ast = self._build_division(q, m, division)
            return Translation(ast, "division", m)

        literal_terms = [t for t in t_p if t.is_number or t.is_entity]

        # "top N" binds a standing-like column with <=
        comparison = self._detect_comparison(q)
        having: Having | None = None
        group_col: tuple[str, str] | None = None
        agg_expr: AggregateExpr | None = None

        for i, term in enumerate(t_p):
            if term.is_number and i > 0 and t_p[i - 1].lemma == "top":
                target = self._standing_column()
                if target:
                    col, table = target
                    predicates.append(BoundPredicate(col, table, "<=", term.numeric_value,
                                                     cue=t_p[i - 1], literal=term))
                    consumed.add(id(term))
                    consumed.add(id(t_p[i - 1]))
                    cue_blocked.add(id(term))
                    cue_blocked.add(id(t_p[i - 1]))
                    tables = _add_table(tables, table)

        if comparison is not None:
            op, number_tok, _ = comparison
            number_term = next(
                (t for t in literal_terms
                 if t.is_number and t.position == number_tok.position and id(t) not in consumed),
                None,
            )
            if number_term is not None:
                cue = self._cue_for(number_term, t_p, cue_blocked)
                if cue is not None and cue[0].column_hint is not None:
                    # a directly named column ("track id over 1000") stays a plain filter
                    predicates.append(BoundPredicate(cue[1], cue[2], op,
                                                     number_term.numeric_value,
                                                     cue=cue[0], literal=number_term))
                    consumed.add(id(number_term))
                    consumed.add(id(cue[0]))
                    cue_blocked.add(id(number_term))
                    cue_blocked.add(id(cue[0]))
                    tables = _add_table(tables, cue[2])
                else:
                    near = self._numeric_column_near(number_term, t_p, consumed)
                    if near is not None:
                        agg_term, agg_col, agg_table, _ = near
                        fn = "SUM"
                        for tok in q.tokens:
                            if tok.lemma in AGG_WORDS:
                                fn = AGG_WORDS[tok.lemma]
                        agg_expr = AggregateExpr(fn, agg_col)
                        having = Having(agg_expr, op, number_term.numeric_value)
                        consumed.add(id(number_term))
                        consumed.add(id(agg_term))
                        cue_blocked.add(id(number_term))
                        cue_blocked.add(id(agg_term))
                        tables = _add_table(tables, agg_table)
                        # group by the subject noun preceding the comparison
                        for term in t_p:
                            if term.tag == "noun" and not term.is_entity and not term.is_number \
                                    and id(term) not in consumed:
                                best = self._best_column(term)
                                if best:
                                    group_col = (best[0], best[1])
                                    consumed.add(id(term))
                                    tables = _add_table(tables, best[1])
                                    break

        # remaining literals
        for term in literal_terms:
            if id(term) in consumed:
                continue
            cue = self._cue_for(term, t_p, cue_blocked)
            if cue is not None:
                cue_term, col, table = cue
                predicates.append(BoundPredicate(col, table, "=",
                                                 term.numeric_value if term.is_number else term.surface,
                                                 cue=cue_term, literal=term))
                consumed.add(id(term))
                consumed.add(id(cue_term))
                cue_blocked.add(id(term))
                cue_blocked.add(id(cue_term))
                tables = _add_table(tables, table)
                continue
            if term.is_number:
                hits = self._columns_containing(term.numeric_value, numeric=True)
                if len(hits) == 1:
                    col, table = hits[0]
                    predicates.append(BoundPredicate(col, table, "=", term.numeric_value,
                                                     literal=term))
                    consumed.add(id(term))
                    tables = _add_table(tables, table)
                elif len(hits) > 1:
                    raise AmbiguousLiteral(
                        f"value {term.surface!r} occurs in columns "
                        + ", ".join(sorted(c for c, _ in hits))
                    )
                else:
                    raise UnboundLiteral(f"no column could hold the value {term.surface!r}")
            elif term.quoted:
                # quoted literals are explicit: bind by value scan or fail loudly
                hits = self._columns_containing(term.surface, numeric=False)
                if len(hits) == 1:
                    col, table = hits[0]
                    predicates.append(BoundPredicate(col, table, "=", term.surface,
                                                     literal=term))
                    consumed.add(id(term))
                    tables = _add_table(tables, table)
                elif len(hits) > 1:
                    raise AmbiguousLiteral(
                        f"value {term.surface!r} occurs in columns "
                        + ", ".join(sorted(c for c, _ in hits))
                    )
                else:
                    raise UnboundLiteral(f"no column could hold the value {term.surface!r}")
            else:
                # capitalization-inferred entities without a cue are row
                # context ("in USA"), not filters
                dropped.append(term)
                consumed.add(id(term))

        # pull in tables needed by unbound attribute nouns, then rebind
        for table, terms in self._attribute_pull_ins(t_p, tables, consumed):
            tables = _add_table(tables, table)
        for pred in predicates:
            tables = _add_table(tables, pred.table)
        if group_col is not None:
            tables = _add_table(tables, group_col[1])
        if not tables:
            raise NoTableMatch()
        tables = self._canonical_table_order(tables)

        mu, unmatched, f_t = bind_attributes(
            t_p, tables, self.catalog,
            table_terms | {t for t in t_p if id(t) in consumed},
            self.config,
        )

        projection = self._projection_items(t_p, mu, consumed)

        if agg_expr is not None and group_col is not None:
            query_class = "aggregate"
            select = (ColumnRef(group_col[0]), agg_expr)
            ast = Query(
                from_tables=tuple(TableRef(t) for t in tables),
                select_items=select,
                where=tuple(self._comparison(p) for p in predicates),
                group_by=group_col[0],
                having=having,
            )
        else:
            if len(tables) > 1:
                query_class = "join"
            elif predicates:
                query_class = "selection"
            elif projection:
                query_class = "projection"
            else:
                query_class = "wildcard"
            ast = Query(
                from_tables=tuple(TableRef(t) for t in tables),
                select_items=tuple(ColumnRef(c) for c in projection),
                wildcard=not projection,
                where=tuple(self._comparison(p) for p in predicates),
            )
        result = Translation(ast, query_class, m, predicates, dropped)
        return result

    def _comparison(self, p: BoundPredicate) -> Comparison:
        return Comparison(ColumnRef(p.column), p.op, p.value)

    def _standing_column(self) -> tuple[str, str] | None:
        vocab = self.catalog.vocabulary
        for col, table, dtype in self.columns:
            if dtype in ("integer", "real") and (
                vocab.share_group("top", strip_name(col)) or strip_name(col) == "top"
            ):
                return col, table
        return None

    def _attribute_pull_ins(self, t_p, tables, consumed):
        selected_cols = {
            c.name.lower()
            for t in tables
            for c in self.catalog.table(t).schema.columns
        }
        pulls = []
        for term in t_p:
            if term.is_number or term.is_entity or id(term) in consumed:
                continue
            if term.tag not in ("noun", "verb", "adjective"):
                continue
            best = self._best_column(term)
            if best is None:
                continue
            col, table, _ = best
            if col.lower() not in selected_cols and table not in tables:
                pulls.append((table, term))
        return pulls

    def _projection_items(self, t_p, mu, consumed) -> list[str]:
        out: list[str] = []
        for term in t_p:  # English order
            if term.tag != "noun" or term.is_entity or term.is_number:
                continue
            if id(term) in consumed:
                continue
            binding = mu.get(term)
            if binding is None:
                continue
            col = binding[0]
            if col not in out:
                out.append(col)
        return out

    def _canonical_table_order(self, tables: list[str]) -> list[str]:
        order = {t.schema.name: i for i, t in enumerate(self.catalog.tables)}
        return sorted(set(tables), key=lambda t: order.get(t, len(order)))


def _add_table(tables: list[str], name: str) -> list[str]:
    if name not in tables:
        return tables + [name]
    return tables


def classify(q: TaggedQuery, catalog: DatabaseCatalog,
             config: MatcherConfig = MatcherConfig()) -> str:
    """Class of the translation that would be produced for this query."""
    return Translator(catalog, config).translate(q).query_class


def translate_text(text: str, catalog: DatabaseCatalog,
                   config: MatcherConfig = MatcherConfig(),
                   pipeline=None) -> Translation:
    from .textpipe import TextPipeline

    pipeline = pipeline or TextPipeline()
    return Translator(catalog, config).translate(pipeline.process(text))
