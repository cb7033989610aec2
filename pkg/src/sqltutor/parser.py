"""Recursive-descent parser for the tutoring SQL dialect.

Keywords are case-insensitive.  Errors carry line/column plus the token set
the parser was expecting, which the tutoring UI surfaces verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import SqlSyntaxError
from .sqlast import (
    AGG_FUNCTIONS,
    AggregateExpr,
    ColumnRef,
    Comparison,
    Contains,
    Except,
    Having,
    InPred,
    NotExists,
    Query,
    TableRef,
)

KEYWORDS = {
    "SELECT", "FROM", "WHERE", "GROUP", "BY", "HAVING", "NATURAL", "JOIN",
    "AS", "AND", "CONTAINS", "IN", "NOT", "EXISTS", "EXCEPT",
}

_LEX_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>'(?:[^']|'')*')
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|<>|!=|≤|≥|≠|=|<|>)
  | (?P<punct>[(),;.*])
    """,
    re.VERBOSE,
)

_OP_ALIASES = {"!=": "<>", "≤": "<=", "≥": ">=", "≠": "<>"}


@dataclass(frozen=True)
class Tok:
    kind: str  # keyword | ident | number | string | op | punct | eof
    value: str
    line: int
    column: int


def lex(text: str) -> list[Tok]:
    tokens = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _LEX_RE.match(text, i)
        if m is None:
            raise SqlSyntaxError(f"unexpected character {text[i]!r}", line, col)
        value = m.group(0)
        if m.lastgroup == "ws":
            pass
        elif m.lastgroup == "string":
            tokens.append(Tok("string", value[1:-1].replace("''", "'"), line, col))
        elif m.lastgroup == "number":
            tokens.append(Tok("number", value, line, col))
        elif m.lastgroup == "ident":
            kind = "keyword" if value.upper() in KEYWORDS else "ident"
            tokens.append(Tok(kind, value.upper() if kind == "keyword" else value, line, col))
        elif m.lastgroup == "op":
            tokens.append(Tok("op", _OP_ALIASES.get(value, value), line, col))
        else:
            tokens.append(Tok("punct", value, line, col))
        for ch in value:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i = m.end()
    tokens.append(Tok("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Tok]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Tok:
        return self.tokens[self.pos]

    def error(self, expected: tuple[str, ...]) -> SqlSyntaxError:
        tok = self.cur
        shown = tok.value if tok.kind != "eof" else "end of input"
        return SqlSyntaxError(f"unexpected {shown!r}", tok.line, tok.column, expected)

    def accept(self, kind: str, value: str | None = None) -> Tok | None:
        tok = self.cur
        if tok.kind == kind and (value is None or tok.value == value):
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, value: str | None = None) -> Tok:
        tok = self.accept(kind, value)
        if tok is None:
            raise self.error((value or kind,))
        return tok

    # --- grammar ---

    def parse(self) -> Query:
        q = self.query(outer_aliases=frozenset())
        self.accept("punct", ";")
        if self.cur.kind != "eof":
            raise self.error(("end of input",))
        return q

    def query(self, outer_aliases: frozenset[str]) -> Query:
        self.expect("keyword", "SELECT")
        wildcard, items = self.select_list()
        self.expect("keyword", "FROM")
        tables = [self.table_ref()]
        while self.cur.kind == "keyword" and self.cur.value == "NATURAL":
            self.pos += 1
            self.expect("keyword", "JOIN")
            tables.append(self.table_ref())
        aliases = outer_aliases | {t.alias.lower() for t in tables if t.alias}
        where: list = []
        if self.accept("keyword", "WHERE"):
            where.append(self.predicate(aliases))
            while self.accept("keyword", "AND"):
                where.append(self.predicate(aliases))
        group_by = None
        if self.accept("keyword", "GROUP"):
            self.expect("keyword", "BY")
            group_by = self.expect("ident").value
        having = None
        if self.accept("keyword", "HAVING"):
            agg = self.aggregate()
            op = self.comparator()
            having = Having(agg, op, self.literal())
        return Query(
            from_tables=tuple(tables),
            select_items=tuple(items),
            wildcard=wildcard,
            where=tuple(where),
            group_by=group_by,
            having=having,
        )

    def select_list(self):
        if self.accept("punct", "*"):
            return True, []
        items = [self.select_item()]
        while self.accept("punct", ","):
            items.append(self.select_item())
        return False, items

    def select_item(self):
        tok = self.cur
        if tok.kind == "ident" and tok.value.upper() in AGG_FUNCTIONS:
            nxt = self.tokens[self.pos + 1]
            if nxt.kind == "punct" and nxt.value == "(":
                return self.aggregate()
        if tok.kind != "ident":
            raise self.error(("column name",))
        self.pos += 1
        return ColumnRef(tok.value)

    def aggregate(self) -> AggregateExpr:
        tok = self.cur
        if tok.kind != "ident" or tok.value.upper() not in AGG_FUNCTIONS:
            raise self.error(AGG_FUNCTIONS)
        self.pos += 1
        self.expect("punct", "(")
        if self.accept("punct", "*"):
            column = "*"
        else:
            column = self.expect("ident").value
        self.expect("punct", ")")
        return AggregateExpr(tok.value.upper(), column)

    def table_ref(self) -> TableRef:
        name = self.expect("ident").value
        if self.accept("keyword", "AS"):
            return TableRef(name, self.expect("ident").value)
        # bare alias: FROM tracks t
        if self.cur.kind == "ident":
            return TableRef(name, self.expect("ident").value)
        return TableRef(name)

    def comparator(self) -> str:
        tok = self.cur
        if tok.kind != "op":
            raise self.error(("comparison operator",))
        self.pos += 1
        return tok.value

    def literal(self):
        tok = self.cur
        if tok.kind == "number":
            self.pos += 1
            return float(tok.value) if "." in tok.value else int(tok.value)
        if tok.kind == "string":
            self.pos += 1
            return tok.value
        raise self.error(("literal",))

    def column_ref(self) -> ColumnRef:
        first = self.expect("ident").value
        if self.accept("punct", "."):
            return ColumnRef(self.expect("ident").value, qualifier=first)
        return ColumnRef(first)

    def predicate(self, aliases: frozenset[str]):
        if self.accept("punct", "("):
            left = self.query(aliases)
            self.expect("punct", ")")
            self.expect("keyword", "CONTAINS")
            self.expect("punct", "(")
            right = self.query(aliases)
            self.expect("punct", ")")
            return Contains(left, right)
        if self.cur.kind == "keyword" and self.cur.value == "NOT":
            nxt = self.tokens[self.pos + 1]
            if nxt.kind == "keyword" and nxt.value == "EXISTS":
                self.pos += 2
                self.expect("punct", "(")
                inner = self.query(aliases)
                if self.accept("keyword", "EXCEPT"):
                    inner = Except(inner, self.query(aliases))
                self.expect("punct", ")")
                return NotExists(inner)
        column = self.column_ref()
        if self.accept("keyword", "IN"):
            return self.in_pred(column, aliases, negated=False)
        if self.cur.kind == "keyword" and self.cur.value == "NOT":
            nxt = self.tokens[self.pos + 1]
            if nxt.kind == "keyword" and nxt.value == "IN":
                self.pos += 2
                return self.in_pred(column, aliases, negated=True, consumed=True)
        op = self.comparator()
        tok = self.cur
        if tok.kind == "ident":
            ref = self.column_ref()
            if ref.qualifier is None and ref.name.lower() in aliases:
                # tuple-variable shorthand: "Artist = t" means "Artist = t.Artist"
                ref = ColumnRef(column.name, qualifier=ref.name)
            return Comparison(column, op, ref)
        return Comparison(column, op, self.literal())

    def in_pred(self, column, aliases, negated, consumed=True):
        self.expect("punct", "(")
        q = self.query(aliases)
        self.expect("punct", ")")
        return InPred(column, q, negated=negated)


def parse_sql(text: str) -> Query:
    """Parse SQL text to a Query AST; raises SqlSyntaxError with position."""
    return _Parser(lex(text)).parse()
