"""In-memory evaluator for the Query AST plus the view-equivalence check used
for grading.

Semantics: bag (multiset) rows, natural join on equal column names, NULL
never joins and never satisfies a comparison, numeric types coerce freely,
text compares case-sensitively.  Grading compares views up to row and column
order; a config switch selects set semantics instead of bag.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import DatabaseCatalog, Value
from .errors import TypeMismatch, UnknownColumn, UnknownTable
from .sqlast import (
    AggregateExpr,
    ColumnRef,
    Comparison,
    Contains,
    Except,
    InPred,
    NotExists,
    Query,
)


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple[Value, ...]]

    def to_json(self) -> dict:
        return {"columns": self.columns, "rows": [list(r) for r in self.rows]}

    def to_csv(self) -> str:
        """Canonical CSV: columns ordered by name."""
        import csv
        import io

        order = sorted(range(len(self.columns)), key=lambda i: self.columns[i].lower())
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([self.columns[i] for i in order])
        for row in sorted(self.rows, key=lambda r: _row_key(tuple(r[i] for i in order))):
            writer.writerow(["" if row[i] is None else row[i] for i in order])
        return buf.getvalue()


# internal row form: (ordered [(lower, display)], list of dict[lower -> value])
_Cols = list[tuple[str, str]]
_Rows = list[dict[str, Value]]


def _instance_frame(catalog: DatabaseCatalog, name: str) -> tuple[_Cols, _Rows]:
    inst = catalog.table(name)
    if inst is None:
        raise UnknownTable(f"unknown table {name!r}")
    cols = [(c.name.lower(), c.name) for c in inst.schema.columns]
    rows = [dict(zip((low for low, _ in cols), r)) for r in inst.rows]
    return cols, rows


def _join_frames(left: tuple[_Cols, _Rows], right: tuple[_Cols, _Rows]) -> tuple[_Cols, _Rows]:
    lcols, lrows = left
    rcols, rrows = right
    shared = [low for low, _ in rcols if any(low == l for l, _ in lcols)]
    out_cols = lcols + [(low, disp) for low, disp in rcols if low not in shared]
    out_rows: _Rows = []
    for lr in lrows:
        for rr in rrows:
            if any(lr[c] is None or rr[c] is None for c in shared):
                continue  # NULL never joins
            if all(_values_equal(lr[c], rr[c]) for c in shared):
                merged = dict(lr)
                for low, _ in rcols:
                    if low not in shared:
                        merged[low] = rr[low]
                out_rows.append(merged)
    return out_cols, out_rows


def _values_equal(a: Value, b: Value) -> bool:
    if a is None or b is None:
        return False
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return a == b


def _compare(a: Value, op: str, b: Value) -> bool:
    if a is None or b is None:
        return False
    a_num = isinstance(a, (int, float))
    b_num = isinstance(b, (int, float))
    if a_num != b_num:
        raise TypeMismatch(f"cannot compare {a!r} with {b!r}")
    if a_num:
        a, b = float(a), float(b)
    if op == "=":
        return a == b
    if op == "<>":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise TypeMismatch(f"unknown comparator {op!r}")


class _Evaluator:
    def __init__(self, catalog: DatabaseCatalog):
        self.catalog = catalog

    def run(self, q: Query, env: dict[str, dict[str, Value]] | None = None) -> ResultTable:
        env = env or {}
        cols, rows = _instance_frame(self.catalog, q.from_tables[0].name)
        for ref in q.from_tables[1:]:
            cols, rows = _join_frames((cols, rows), _instance_frame(self.catalog, ref.name))
        aliases = [t.alias.lower() for t in q.from_tables if t.alias]

        kept: _Rows = []
        for row in rows:
            local_env = dict(env)
            for alias in aliases:
                local_env[alias] = row
            if all(self._predicate(p, row, cols, local_env) for p in q.where):
                kept.append(row)

        if q.group_by or q.having or any(isinstance(i, AggregateExpr) for i in q.select_items):
            return self._grouped(q, cols, kept)
        return self._project(q, cols, kept)

    # --- predicates ---

    def _resolve(self, ref: ColumnRef, row: dict[str, Value], cols: _Cols,
                 env: dict[str, dict[str, Value]]) -> Value:
        low = ref.name.lower()
        if ref.qualifier:
            outer = env.get(ref.qualifier.lower())
            if outer is None:
                raise UnknownColumn(f"unknown tuple variable {ref.qualifier!r}")
            if low not in outer:
                raise UnknownColumn(f"unknown column {ref.render()!r}")
            return outer[low]
        if low not in row:
            raise UnknownColumn(f"unknown column {ref.name!r}")
        return row[low]

    def _predicate(self, pred, row, cols: _Cols, env) -> bool:
        if isinstance(pred, Comparison):
            left = self._resolve(pred.left, row, cols, env)
            right = (
                self._resolve(pred.right, row, cols, env)
                if isinstance(pred.right, ColumnRef)
                else pred.right
            )
            return _compare(left, pred.op, right)
        if isinstance(pred, Contains):
            left = {_row_key(r) for r in self.run(pred.left, env).rows}
            right = {_row_key(r) for r in self.run(pred.right, env).rows}
            return right <= left
        if isinstance(pred, NotExists):
            inner = pred.query
            if isinstance(inner, Except):
                left = {_row_key(r) for r in self.run(inner.left, env).rows}
                right = {_row_key(r) for r in self.run(inner.right, env).rows}
                return not (left - right)
            return not self.run(inner, env).rows
        if isinstance(pred, InPred):
            value = self._resolve(pred.column, row, cols, env)
            members = {r[0] for r in self.run(pred.query, env).rows}
            hit = value is not None and any(_values_equal(value, m) for m in members)
            return (not hit) if pred.negated else hit
        raise TypeMismatch(f"unsupported predicate {pred!r}")

    # --- output shaping ---

    def _display(self, cols: _Cols, name: str) -> str:
        low = name.lower()
        for clow, disp in cols:
            if clow == low:
                return disp
        raise UnknownColumn(f"unknown column {name!r}")

    def _project(self, q: Query, cols: _Cols, rows: _Rows) -> ResultTable:
        if q.wildcard:
            names = [disp for _, disp in cols]
            lows = [low for low, _ in cols]
        else:
            names, lows = [], []
            for item in q.select_items:
                names.append(self._display(cols, item.name))
                lows.append(item.name.lower())
        return ResultTable(names, [tuple(r[low] for low in lows) for r in rows])

    def _grouped(self, q: Query, cols: _Cols, rows: _Rows) -> ResultTable:
        group_low = q.group_by.lower() if q.group_by else None
        if group_low is not None:
            self._display(cols, group_low)
        groups: dict[object, _Rows] = {}
        for row in rows:
            key = row[group_low] if group_low else True
            groups.setdefault(key, []).append(row)

        def aggregate(agg: AggregateExpr, members: _Rows) -> Value:
            if agg.fn == "COUNT" and agg.column == "*":
                return len(members)
            low = agg.column.lower()
            self._display(cols, low)
            values = [m[low] for m in members if m[low] is not None]
            if agg.fn == "COUNT":
                return len(values)
            if not values:
                return None
            if agg.fn == "SUM":
                return sum(values)
            if agg.fn == "AVG":
                return sum(values) / len(values)
            if agg.fn == "MIN":
                return min(values)
            return max(values)

        names: list[str] = []
        for item in q.select_items:
            if isinstance(item, AggregateExpr):
                names.append(item.render())
            else:
                if group_low is None or item.name.lower() != group_low:
                    raise UnknownColumn(
                        f"column {item.name!r} must appear in GROUP BY to be selected"
                    )
                names.append(self._display(cols, item.name))

        out_rows = []
        for key, members in groups.items():
            if q.having:
                value = aggregate(q.having.agg, members)
                if value is None or not _compare(value, q.having.op, q.having.value):
                    continue
            out = []
            for item in q.select_items:
                if isinstance(item, AggregateExpr):
                    out.append(aggregate(item, members))
                else:
                    out.append(members[0][group_low])
            out_rows.append(tuple(out))
        return ResultTable(names, out_rows)


def execute(ast: Query, catalog: DatabaseCatalog) -> ResultTable:
    """Evaluate an AST against the catalog.  Containment predicates may be
    present; they are evaluated directly by set comparison."""
    return _Evaluator(catalog).run(ast)


def natural_join(left: ResultTable, right: ResultTable) -> ResultTable:
    lframe = ([(c.lower(), c) for c in left.columns],
              [dict(zip((c.lower() for c in left.columns), r)) for r in left.rows])
    rframe = ([(c.lower(), c) for c in right.columns],
              [dict(zip((c.lower() for c in right.columns), r)) for r in right.rows])
    cols, rows = _join_frames(lframe, rframe)
    return ResultTable([disp for _, disp in cols], [tuple(r[low] for low, _ in cols) for r in rows])


def _value_key(v: Value):
    if v is None:
        return (0, "")
    if isinstance(v, (int, float)):
        return (1, float(v), "")
    return (2, 0.0, v)


def _row_key(row: tuple[Value, ...]):
    return tuple(_value_key(v) for v in row)


def result_equal(r1: ResultTable, r2: ResultTable, bag: bool = True) -> bool:
    """True when both tables hold the same view: same column-name multiset and
    same rows once columns are aligned by name and row order is ignored."""
    c1 = sorted((c.lower() for c in r1.columns))
    c2 = sorted((c.lower() for c in r2.columns))
    if c1 != c2:
        return False
    order1 = sorted(range(len(r1.columns)), key=lambda i: (r1.columns[i].lower(), i))
    order2 = sorted(range(len(r2.columns)), key=lambda i: (r2.columns[i].lower(), i))
    rows1 = [_row_key(tuple(r[i] for i in order1)) for r in r1.rows]
    rows2 = [_row_key(tuple(r[i] for i in order2)) for r in r2.rows]
    if bag:
        return sorted(rows1) == sorted(rows2)
    return set(rows1) == set(rows2)
