"""Command-line front door: one-shot translation, a tutoring REPL, batch
grading and the HTTP service launcher.

Every command is a thin adapter over the service layer: argument parsing and
output formatting only.  Exit codes: 0 success, 1 configuration or input
error, 2 translation failure.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from pathlib import Path

import click

from .engine import ResultTable
from .errors import SqlTutorError, TranslationFailed
from .matcher import MatcherConfig
from .service import TutorService, grade_batch

ENV_DATA_DIR = "SQLTUTOR_DATA_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TRANSLATION = 2


def format_result(result: ResultTable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.to_json(), indent=2)
    if fmt == "csv":
        return result.to_csv()
    # aligned text table
    widths = [len(c) for c in result.columns]
    rows = [["" if v is None else str(v) for v in row] for row in result.rows]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(c.ljust(w) for c, w in zip(result.columns, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append(f"({len(rows)} row{'s' if len(rows) != 1 else ''})")
    return "\n".join(lines)


def build_service(data_dir: str | None, vocab: str | None,
                  delta: float, tau: float) -> TutorService:
    root = data_dir or os.environ.get(ENV_DATA_DIR)
    try:
        config = MatcherConfig(delta=delta, tau=tau)
        return TutorService(
            data_root=Path(root) if root else None,
            config=config,
            vocabulary_path=Path(vocab) if vocab else None,
        )
    except (SqlTutorError, OSError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc


def common_options(fn):
    fn = click.option("--db", "database_id", default="music", show_default=True,
                      help="Database id inside the data directory.")(fn)
    fn = click.option("--data-dir", envvar=ENV_DATA_DIR, default=None,
                      help=f"Data root (default: packaged data; env {ENV_DATA_DIR}).")(fn)
    fn = click.option("--vocab", default=None, help="Synonym vocabulary JSON file.")(fn)
    fn = click.option("--delta", default=0.2, show_default=True,
                      help="Relative margin for table selection.")(fn)
    fn = click.option("--tau", default=0.5, show_default=True,
                      help="Similarity floor for table-name matches.")(fn)
    fn = click.option("--format", "fmt", default="table", show_default=True,
                      type=click.Choice(["table", "csv", "json"]))(fn)
    return fn


@click.group()
def main():
    """English-to-SQL tutoring toolkit."""


@main.command()
@common_options
@click.option("--explain", is_flag=True, help="Show match diagnostics.")
@click.argument("text")
def translate(database_id, data_dir, vocab, delta, tau, fmt, explain, text):
    """Translate one English query, run it, and print the results."""
    service = build_service(data_dir, vocab, delta, tau)
    session = service.start_session("tutor", database_id)
    try:
        out = service.translate_and_run(session.id, text)
    except TranslationFailed as exc:
        click.echo(f"error: {exc.message}", err=True)
        if exc.hint:
            click.echo(exc.hint, err=True)
        sys.exit(EXIT_TRANSLATION)
    except SqlTutorError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(out["sql_text"])
    click.echo()
    click.echo(format_result(out["result_table"], fmt))
    if explain:
        click.echo()
        click.echo(json.dumps(out["match_diagnostics"], indent=2))
    sys.exit(EXIT_OK)


@main.command()
@common_options
def repl(database_id, data_dir, vocab, delta, tau, fmt):
    """Interactive tutoring loop.  Prefix a line with ":" to run raw SQL;
    type :quit to leave."""
    service = build_service(data_dir, vocab, delta, tau)
    session = service.start_session("tutor", database_id)
    click.echo(f"Connected to database {database_id!r}. "
               'Type English, ":<sql>" for raw SQL, or ":quit".')
    while True:
        try:
            line = input("> ").strip()
        except (EOFError, KeyboardInterrupt):
            click.echo()
            break
        if not line:
            continue
        if line in (":quit", ":q", ":exit"):
            break
        try:
            if line.startswith(":"):
                result = service.run_sql(session.id, line[1:].strip())
            else:
                out = service.translate_and_run(session.id, line)
                click.echo(out["sql_text"])
                result = out["result_table"]
            click.echo(format_result(result, fmt))
        except SqlTutorError as exc:
            click.echo(f"error: {exc}")
            if exc.hint:
                click.echo(exc.hint)
    sys.exit(EXIT_OK)


@main.command()
@common_options
@click.argument("submissions", type=click.Path(exists=True, dir_okay=False))
def grade(database_id, data_dir, vocab, delta, tau, fmt, submissions):
    """Grade a batch of submissions.

    SUBMISSIONS is a JSON array (or CSV with a header) of records with fields
    student, assignment, sql.
    """
    service = build_service(data_dir, vocab, delta, tau)
    path = Path(submissions)
    try:
        if path.suffix.lower() == ".csv":
            with path.open(newline="", encoding="utf-8") as fh:
                records = list(csv.DictReader(fh))
        else:
            records = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(records, list):
            raise ValueError("submissions file must hold a list of records")
        for i, rec in enumerate(records):
            missing = {"student", "assignment", "sql"} - set(rec or {})
            if missing:
                raise ValueError(f"record {i + 1} is missing fields: {sorted(missing)}")
    except (ValueError, json.JSONDecodeError) as exc:
        click.echo(f"error: malformed submissions file: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        report = grade_batch(service, database_id, records)
    except SqlTutorError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if fmt == "json":
        click.echo(json.dumps(report, indent=2))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["student", "assignment", "verdict", "points"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(report)
        click.echo(buf.getvalue().rstrip("\n"))
    sys.exit(EXIT_OK)


@main.command()
@click.option("--data-dir", envvar=ENV_DATA_DIR, default=None)
@click.option("--vocab", default=None)
@click.option("--delta", default=0.2, show_default=True)
@click.option("--tau", default=0.5, show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(data_dir, vocab, delta, tau, port, host):
    """Run the HTTP tutoring service."""
    import uvicorn

    from .api import create_app

    service = build_service(data_dir, vocab, delta, tau)
    try:
        uvicorn.run(create_app(service), host=host, port=port, log_level="info")
    except (OSError, SystemExit) as exc:
        if isinstance(exc, SystemExit) and not exc.code:
            sys.exit(EXIT_OK)
        click.echo(f"error: could not serve on {host}:{port}: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


if __name__ == "__main__":
    main()
