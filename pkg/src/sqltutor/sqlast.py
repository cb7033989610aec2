"""Canonical SQL abstract syntax shared by the generator, the parser and the
evaluator, plus rendering and structural comparison.

The dialect is small: SELECT lists (wildcard, columns, aggregates), NATURAL
JOIN chains with AS aliases, conjunctive WHERE, GROUP BY / HAVING, and the
subquery forms CONTAINS, IN, NOT EXISTS and EXCEPT.  CONTAINS is a teaching
convenience and is rewritten to NOT EXISTS / EXCEPT before execution.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

Literal = str | int | float

COMPARATORS = ("=", "<>", "<=", ">=", "<", ">")

AGG_FUNCTIONS = ("SUM", "AVG", "MIN", "MAX", "COUNT")


@dataclass(frozen=True)
class ColumnRef:
    name: str
    qualifier: str | None = None  # tuple-variable alias for correlated refs

    def render(self) -> str:
        return f"{self.qualifier}.{self.name}" if self.qualifier else self.name


@dataclass(frozen=True)
class AggregateExpr:
    fn: str  # one of AGG_FUNCTIONS
    column: str  # "*" only for COUNT

    def render(self) -> str:
        return f"{self.fn}({self.column})"


SelectItem = ColumnRef | AggregateExpr


@dataclass(frozen=True)
class TableRef:
    name: str
    alias: str | None = None

    def render(self) -> str:
        return f"{self.name} AS {self.alias}" if self.alias else self.name


@dataclass(frozen=True)
class Comparison:
    left: ColumnRef
    op: str  # one of COMPARATORS
    right: Literal | ColumnRef


@dataclass(frozen=True)
class Contains:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class Except:
    left: "Query"
    right: "Query"


@dataclass(frozen=True)
class NotExists:
    query: "Query | Except"


@dataclass(frozen=True)
class InPred:
    column: ColumnRef
    query: "Query"
    negated: bool = False


Predicate = Comparison | Contains | NotExists | InPred


@dataclass(frozen=True)
class Having:
    agg: AggregateExpr
    op: str
    value: Literal


@dataclass(frozen=True)
class Query:
    from_tables: tuple[TableRef, ...]
    select_items: tuple[SelectItem, ...] = ()
    wildcard: bool = False
    where: tuple[Predicate, ...] = ()
    group_by: str | None = None
    having: Having | None = None


def render_literal(value: Literal) -> str:
    if isinstance(value, str):
        return "'" + value.replace("'", "''") + "'"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _render_predicate(pred: Predicate, indent: str) -> str:
    if isinstance(pred, Comparison):
        rhs = pred.right.render() if isinstance(pred.right, ColumnRef) else render_literal(pred.right)
        return f"{pred.left.render()} {pred.op} {rhs}"
    if isinstance(pred, Contains):
        return (
            f"(\n{_render_query(pred.left, indent + '  ')}\n{indent}) CONTAINS (\n"
            f"{_render_query(pred.right, indent + '  ')}\n{indent})"
        )
    if isinstance(pred, NotExists):
        inner = pred.query
        if isinstance(inner, Except):
            body = (
                f"{_render_query(inner.left, indent + '  ')}\n{indent}  EXCEPT\n"
                f"{_render_query(inner.right, indent + '  ')}"
            )
        else:
            body = _render_query(inner, indent + "  ")
        return f"NOT EXISTS (\n{body}\n{indent})"
    if isinstance(pred, InPred):
        kw = "NOT IN" if pred.negated else "IN"
        return f"{pred.column.render()} {kw} (\n{_render_query(pred.query, indent + '  ')}\n{indent})"
    raise TypeError(f"unknown predicate {pred!r}")


def _render_query(q: Query, indent: str = "") -> str:
    if q.wildcard:
        select = "*"
    else:
        select = ", ".join(item.render() for item in q.select_items)
    lines = [f"{indent}SELECT {select}"]
    lines.append(f"{indent}FROM " + " NATURAL JOIN ".join(t.render() for t in q.from_tables))
    if q.where:
        rendered = [_render_predicate(p, indent) for p in q.where]
        lines.append(f"{indent}WHERE " + " AND ".join(rendered))
    if q.group_by:
        lines.append(f"{indent}GROUP BY {q.group_by}")
    if q.having:
        lines.append(
            f"{indent}HAVING {q.having.agg.render()} {q.having.op} {render_literal(q.having.value)}"
        )
    return "\n".join(lines)


def render_sql(q: Query) -> str:
    """Deterministic canonical text; parsing it back yields an equal AST."""
    return _render_query(q) + ";"


# --- structural comparison ---------------------------------------------------
#
# Conjunction order, SELECT column order and join order never affect the
# computed view, so the canonical form treats them as multisets.  Identifier
# comparison is case-insensitive; literal text is case-sensitive.

def _canon_select_item(item: SelectItem):
    if isinstance(item, AggregateExpr):
        return ("agg", item.fn.upper(), item.column.lower())
    return ("col", item.name.lower(), (item.qualifier or "").lower())


def _canon_literal(value: Literal):
    if isinstance(value, (int, float)):
        return ("num", float(value))
    return ("str", value)


def _canon_predicate(pred: Predicate):
    if isinstance(pred, Comparison):
        right = (
            ("ref", pred.right.name.lower(), (pred.right.qualifier or "").lower())
            if isinstance(pred.right, ColumnRef)
            else _canon_literal(pred.right)
        )
        left = (pred.left.name.lower(), (pred.left.qualifier or "").lower())
        # orient < and > consistently: a > b and b < a are the same constraint
        return ("cmp", left, pred.op, right)
    if isinstance(pred, Contains):
        return ("contains", canonical(pred.left), canonical(pred.right))
    if isinstance(pred, NotExists):
        inner = pred.query
        if isinstance(inner, Except):
            return ("notexists-except", canonical(inner.left), canonical(inner.right))
        return ("notexists", canonical(inner))
    if isinstance(pred, InPred):
        return ("in", pred.negated, (pred.column.name.lower(), (pred.column.qualifier or "").lower()),
                canonical(pred.query))
    raise TypeError(f"unknown predicate {pred!r}")


def canonical(q: Query):
    """Hashable normal form used for structural equality."""
    select = "*" if q.wildcard else tuple(sorted(_canon_select_item(i) for i in q.select_items))
    tables = tuple(sorted((t.name.lower(), (t.alias or "").lower()) for t in q.from_tables))
    where = tuple(sorted(_canon_predicate(p) for p in q.where))
    having = None
    if q.having:
        having = (q.having.agg.fn.upper(), q.having.agg.column.lower(), q.having.op,
                  _canon_literal(q.having.value))
    return (select, tables, where, (q.group_by or "").lower(), having)


def structurally_equal(a: Query, b: Query) -> bool:
    return canonical(a) == canonical(b)


# --- CONTAINS desugaring -----------------------------------------------------

def desugar_contains(q: Query) -> Query:
    """Rewrite set-containment to the executable double-negation form:
    left CONTAINS right  ==  NOT EXISTS (right EXCEPT left).

    Covers the vacuous case (empty right side satisfies every row).  Queries
    without a containment predicate are returned unchanged.
    """
    new_where = []
    changed = False
    for pred in q.where:
        if isinstance(pred, Contains):
            new_where.append(NotExists(Except(pred.right, pred.left)))
            changed = True
        else:
            new_where.append(pred)
    if not changed:
        return q
    return replace(q, where=tuple(new_where))
