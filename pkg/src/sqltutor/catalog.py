"""Database catalog: schemas, in-memory relation instances and the synonym
vocabulary.

A catalog is built once from a schema JSON document plus one CSV file per
table, validated, and is immutable afterwards.  All name lookups are
case-insensitive; the declared spellings are preserved for display.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DataFileMissing,
    PrimaryKeyViolation,
    RowArityMismatch,
    SchemaParseError,
)

DTYPES = ("text", "integer", "real")

Value = str | int | float | None


@dataclass(frozen=True)
class ColumnDef:
    name: str
    dtype: str  # one of DTYPES

    def __post_init__(self):
        if not self.name:
            raise SchemaParseError("column name must be nonempty")
        if self.dtype not in DTYPES:
            raise SchemaParseError(f"unknown dtype {self.dtype!r} for column {self.name!r}")


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: tuple[ColumnDef, ...]
    primary_key: tuple[str, ...]

    def __post_init__(self):
        if not self.name:
            raise SchemaParseError("table name must be nonempty")
        if not self.columns:
            raise SchemaParseError(f"table {self.name!r} declares no columns")
        seen = set()
        for col in self.columns:
            key = col.name.lower()
            if key in seen:
                raise SchemaParseError(f"duplicate column {col.name!r} in table {self.name!r}")
            seen.add(key)
        for pk in self.primary_key:
            if pk.lower() not in seen:
                raise SchemaParseError(
                    f"primary key column {pk!r} not declared in table {self.name!r}"
                )

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> ColumnDef | None:
        low = name.lower()
        for c in self.columns:
            if c.name.lower() == low:
                return c
        return None


@dataclass(frozen=True)
class RelationInstance:
    schema: TableSchema
    rows: tuple[tuple[Value, ...], ...]

    def __post_init__(self):
        arity = len(self.schema.columns)
        for i, row in enumerate(self.rows):
            if len(row) != arity:
                raise RowArityMismatch(
                    f"table {self.schema.name!r} row {i + 1}: expected {arity} values, got {len(row)}"
                )
        if self.schema.primary_key:
            idx = [
                [c.name.lower() for c in self.schema.columns].index(pk.lower())
                for pk in self.schema.primary_key
            ]
            seen: dict[tuple, int] = {}
            for i, row in enumerate(self.rows):
                key = tuple(row[j] for j in idx)
                if key in seen:
                    raise PrimaryKeyViolation(
                        f"table {self.schema.name!r} rows {seen[key] + 1} and {i + 1} "
                        f"share primary key {key!r}"
                    )
                seen[key] = i


class Vocabulary:
    """Synonym groups; membership and lookup are case-insensitive."""

    def __init__(self, groups: list[set[str]] | None = None):
        self.groups: list[frozenset[str]] = []
        for g in groups or []:
            norm = frozenset(t.lower() for t in g)
            if len(norm) < 2:
                raise SchemaParseError("each synonym group needs at least 2 members")
            self.groups.append(norm)

    @classmethod
    def from_file(cls, path: Path) -> "Vocabulary":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaParseError(f"cannot read vocabulary file {path}: {exc}") from exc
        if not isinstance(raw, list):
            raise SchemaParseError("vocabulary file must be a JSON array of string arrays")
        return cls([set(group) for group in raw])

    def synonyms_of(self, term: str) -> set[str]:
        low = term.lower()
        out: set[str] = set()
        for g in self.groups:
            if low in g:
                out |= g
        out.discard(low)
        return out

    def share_group(self, a: str, b: str) -> bool:
        la, lb = a.lower(), b.lower()
        if la == lb:
            return False
        return any(la in g and lb in g for g in self.groups)


class DatabaseCatalog:
    """Immutable bundle of relation instances plus the vocabulary."""

    def __init__(self, name: str, tables: list[RelationInstance], vocabulary: Vocabulary):
        self.name = name
        self._tables: dict[str, RelationInstance] = {}
        for t in tables:
            key = t.schema.name.lower()
            if key in self._tables:
                raise SchemaParseError(f"duplicate table name {t.schema.name!r}")
            self._tables[key] = t
        self.vocabulary = vocabulary

    @property
    def tables(self) -> list[RelationInstance]:
        return list(self._tables.values())

    def table(self, name: str) -> RelationInstance | None:
        return self._tables.get(name.lower())

    def table_names(self) -> list[str]:
        return [t.schema.name for t in self._tables.values()]

    def synonyms_of(self, term: str) -> set[str]:
        return self.vocabulary.synonyms_of(term)

    def schema_doc(self) -> dict:
        """Serializable schema description; round-trips through the loader."""
        return {
            "tables": [
                {
                    "name": t.schema.name,
                    "columns": [{"name": c.name, "type": c.dtype} for c in t.schema.columns],
                    "primary_key": list(t.schema.primary_key),
                }
                for t in self._tables.values()
            ]
        }


def _coerce(raw: str, dtype: str, table: str, row_no: int, col: str) -> Value:
    if raw == "":
        return None  # empty CSV field = SQL NULL
    if dtype == "text":
        return raw
    try:
        if dtype == "integer":
            return int(raw.replace(",", ""))
        return float(raw)
    except ValueError as exc:
        raise SchemaParseError(
            f"table {table!r} row {row_no}, column {col!r}: cannot coerce {raw!r} to {dtype}"
        ) from exc


def parse_schema_doc(doc: str | dict) -> list[TableSchema]:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaParseError(f"schema document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "tables" not in doc:
        raise SchemaParseError('schema document must be an object with a "tables" list')
    schemas = []
    seen = set()
    for t in doc["tables"]:
        try:
            name = t["name"]
            columns = tuple(ColumnDef(c["name"], c["type"]) for c in t["columns"])
            pk = tuple(t.get("primary_key", []))
        except (KeyError, TypeError) as exc:
            raise SchemaParseError(f"malformed table entry: {t!r}") from exc
        if name.lower() in seen:
            raise SchemaParseError(f"duplicate table name {name!r}")
        seen.add(name.lower())
        schemas.append(TableSchema(name, columns, pk))
    return schemas


def load_table(schema: TableSchema, data_dir: Path) -> RelationInstance:
    path = Path(data_dir) / f"{schema.name.lower()}.csv"
    if not path.exists():
        raise DataFileMissing(f"no data file for table {schema.name!r}: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RowArityMismatch(f"data file {path} is empty (header row required)")
        declared = [c.name.lower() for c in schema.columns]
        if [h.lower() for h in header] != declared:
            raise SchemaParseError(
                f"table {schema.name!r}: CSV header {header!r} does not match schema columns"
            )
        rows = []
        for row_no, raw in enumerate(reader, start=2):
            if len(raw) != len(schema.columns):
                raise RowArityMismatch(
                    f"table {schema.name!r} row {row_no}: expected {len(schema.columns)} "
                    f"fields, got {len(raw)}"
                )
            rows.append(
                tuple(
                    _coerce(v, c.dtype, schema.name, row_no, c.name)
                    for v, c in zip(raw, schema.columns)
                )
            )
    return RelationInstance(schema, tuple(rows))


def load_database(
    schema_doc: str | dict | Path,
    data_dir: str | Path,
    vocabulary: Vocabulary | None = None,
    name: str | None = None,
) -> DatabaseCatalog:
    """Build a catalog from a schema document and a directory of CSV files.

    ``schema_doc`` may be a JSON string, a parsed dict, or a path to a JSON
    file.  One ``<table>.csv`` per declared table must exist in ``data_dir``.
    """
    data_dir = Path(data_dir)
    if isinstance(schema_doc, Path):
        if name is None:
            name = data_dir.name
        schema_doc = schema_doc.read_text(encoding="utf-8")
    schemas = parse_schema_doc(schema_doc)
    tables = [load_table(s, data_dir) for s in schemas]
    return DatabaseCatalog(name or data_dir.name, tables, vocabulary or Vocabulary())
