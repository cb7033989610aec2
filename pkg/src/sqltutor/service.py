"""Session and assignment management: the tutoring loop (English → SQL →
results) and the assessment loop (student SQL → grade).

State is file-backed and replayable: assignments ship as one JSON file per
database, and every graded submission is appended to a JSON-lines log from
which the score can be recomputed exactly.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .catalog import DatabaseCatalog, Vocabulary, load_database
from .engine import ResultTable, execute, result_equal
from .errors import (
    DuplicateSubmission,
    MissingDifficulty,
    ModeViolation,
    SqlTutorError,
    TranslationFailed,
    UnknownAssignment,
    UnknownDatabase,
    UnknownSession,
)
from .generator import Translator
from .matcher import MatcherConfig
from .parser import parse_sql
from .sqlast import desugar_contains, render_sql
from .textpipe import TextPipeline

DATA_DIR = Path(__file__).parent / "data"

DIFFICULTY_LABELS = {1: "easy", 2: "medium", 3: "hard"}

MODES = ("tutor", "assessment")


@dataclass(frozen=True)
class Assignment:
    id: str
    difficulty: int
    prompt_en: str
    reference_sql: str
    points: int

    def __post_init__(self):
        if self.difficulty not in DIFFICULTY_LABELS:
            raise SqlTutorError(f"assignment {self.id!r}: difficulty must be 1, 2 or 3")
        if self.points <= 0:
            raise SqlTutorError(f"assignment {self.id!r}: points must be positive")

    @property
    def difficulty_label(self) -> str:
        return DIFFICULTY_LABELS[self.difficulty]


@dataclass
class SubmissionRecord:
    assignment_id: str
    sql_text: str
    correct: bool
    earned_points: int
    error: str | None = None


@dataclass
class Session:
    id: str
    mode: str
    database_id: str
    difficulty: int | None
    assignments: list[Assignment] = field(default_factory=list)
    submissions: dict[str, list[SubmissionRecord]] = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def possible(self) -> int:
        return sum(a.points for a in self.assignments)

    @property
    def earned(self) -> int:
        return sum(
            rec.earned_points
            for records in self.submissions.values()
            for rec in records
        )


def load_assignments(path: Path) -> list[Assignment]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    out = [
        Assignment(
            id=a["id"],
            difficulty=a["difficulty"],
            prompt_en=a["prompt_en"],
            reference_sql=a["reference_sql"],
            points=a["points"],
        )
        for a in raw
    ]
    seen = set()
    for a in out:
        if a.id in seen:
            raise SqlTutorError(f"duplicate assignment id {a.id!r}")
        seen.add(a.id)
    return out


class TutorService:
    """Embeds the whole pipeline behind session-scoped operations.

    ``attempts_per_assignment`` defaults to one graded try; ``bag_semantics``
    selects multiset versus set comparison when grading.
    """

    def __init__(
        self,
        data_root: Path | str | None = None,
        config: MatcherConfig = MatcherConfig(),
        attempts_per_assignment: int = 1,
        bag_semantics: bool = True,
        submission_log: Path | str | None = None,
        vocabulary_path: Path | str | None = None,
    ):
        self.data_root = Path(data_root) if data_root else DATA_DIR
        self.config = config
        self.attempts_per_assignment = attempts_per_assignment
        self.bag_semantics = bag_semantics
        self.submission_log = Path(submission_log) if submission_log else None
        self.pipeline = TextPipeline()
        self._log_lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._sessions_lock = threading.Lock()

        vocab_path = Path(vocabulary_path) if vocabulary_path \
            else self.data_root / "vocabulary.json"
        vocabulary = Vocabulary.from_file(vocab_path) if vocab_path.exists() else Vocabulary()
        self.catalogs: dict[str, DatabaseCatalog] = {}
        self.assignment_packs: dict[str, list[Assignment]] = {}
        db_root = self.data_root / "databases"
        if db_root.is_dir():
            for entry in sorted(db_root.iterdir()):
                schema_path = entry / "schema.json"
                if not schema_path.is_file():
                    continue
                catalog = load_database(schema_path, entry, vocabulary, name=entry.name)
                self.catalogs[entry.name] = catalog
                assignments_path = entry / "assignments.json"
                pack = load_assignments(assignments_path) if assignments_path.exists() else []
                for a in pack:  # invariant: references parse and execute
                    execute(desugar_contains(parse_sql(a.reference_sql)), catalog)
                self.assignment_packs[entry.name] = pack

    # --- lookups ---

    def database_ids(self) -> list[str]:
        return sorted(self.catalogs)

    def catalog(self, database_id: str) -> DatabaseCatalog:
        try:
            return self.catalogs[database_id]
        except KeyError:
            raise UnknownDatabase(f"unknown database {database_id!r}") from None

    def schema_doc(self, database_id: str) -> dict:
        return self.catalog(database_id).schema_doc()

    def session(self, session_id: str) -> Session:
        with self._sessions_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSession(f"unknown session {session_id!r}") from None

    # --- operations ---

    def start_session(self, mode: str, database_id: str,
                      difficulty: int | None = None) -> Session:
        if mode not in MODES:
            raise ModeViolation(f"mode must be one of {MODES}, got {mode!r}")
        self.catalog(database_id)  # raises UnknownDatabase
        assignments: list[Assignment] = []
        if mode == "assessment":
            if difficulty is None:
                raise MissingDifficulty("assessment sessions require a difficulty level")
            if difficulty not in DIFFICULTY_LABELS:
                raise MissingDifficulty("difficulty must be 1, 2 or 3")
            assignments = [
                a for a in self.assignment_packs.get(database_id, [])
                if a.difficulty == difficulty
            ]
        session = Session(
            id=uuid.uuid4().hex,
            mode=mode,
            database_id=database_id,
            difficulty=difficulty,
            assignments=assignments,
        )
        with self._sessions_lock:
            self._sessions[session.id] = session
        return session

    def translate_and_run(self, session_id: str, text: str) -> dict:
        session = self.session(session_id)
        if session.mode != "tutor":
            raise ModeViolation("the voice interface is disabled in assessment sessions")
        catalog = self.catalog(session.database_id)
        with session.lock:
            try:
                tagged = self.pipeline.process(text)
                translation = Translator(catalog, self.config).translate(tagged)
            except SqlTutorError as exc:
                if exc.code in ("no_table_match", "unbound_literal", "ambiguous_literal",
                                "empty_query"):
                    raise TranslationFailed(exc.message, cause=exc) from exc
                raise
            sql_text = render_sql(translation.ast)
            result = execute(desugar_contains(translation.ast), catalog)
            payload = {
                "sql_text": sql_text,
                "result_table": result,
                "match_diagnostics": translation.diagnostics(),
            }
            session.history.append({"kind": "translate", "text": text, "sql": sql_text})
            return payload

    def run_sql(self, session_id: str, sql_text: str) -> ResultTable:
        session = self.session(session_id)
        if session.mode != "tutor":
            raise ModeViolation("raw SQL execution is a tutor-mode operation")
        catalog = self.catalog(session.database_id)
        with session.lock:
            result = execute(desugar_contains(parse_sql(sql_text)), catalog)
            session.history.append({"kind": "sql", "sql": sql_text})
            return result

    def assignments_for(self, session_id: str) -> list[Assignment]:
        return list(self.session(session_id).assignments)

    def submit_answer(self, session_id: str, assignment_id: str, sql_text: str) -> dict:
        session = self.session(session_id)
        if session.mode != "assessment":
            raise ModeViolation("answers can only be submitted in assessment sessions")
        assignment = next(
            (a for a in session.assignments if a.id == assignment_id), None
        )
        if assignment is None:
            raise UnknownAssignment(
                f"assignment {assignment_id!r} is not part of this session"
            )
        catalog = self.catalog(session.database_id)
        with session.lock:
            attempts = session.submissions.get(assignment_id, [])
            if len(attempts) >= self.attempts_per_assignment:
                raise DuplicateSubmission(
                    f"assignment {assignment_id!r} has already been graded"
                )
            correct = False
            error: str | None = None
            try:
                student = execute(desugar_contains(parse_sql(sql_text)), catalog)
                reference = execute(
                    desugar_contains(parse_sql(assignment.reference_sql)), catalog
                )
                correct = result_equal(student, reference, bag=self.bag_semantics)
            except SqlTutorError as exc:
                # a submission that fails to parse or execute counts as incorrect
                error = str(exc)
            record = SubmissionRecord(
                assignment_id=assignment_id,
                sql_text=sql_text,
                correct=correct,
                earned_points=assignment.points if correct else 0,
                error=error,
            )
            session.submissions.setdefault(assignment_id, []).append(record)
            self._append_log(session, record)
            return {
                "correct": correct,
                "earned_points": record.earned_points,
                "expected_shown": not correct,
                "error": error,
            }

    def get_score(self, session_id: str) -> dict:
        session = self.session(session_id)
        with session.lock:
            per_assignment = []
            for a in session.assignments:
                records = session.submissions.get(a.id, [])
                per_assignment.append({
                    "assignment_id": a.id,
                    "points": a.points,
                    "status": "graded" if records else "ungraded",
                    "correct": any(r.correct for r in records),
                    "earned": sum(r.earned_points for r in records),
                })
            return {
                "earned": session.earned,
                "possible": session.possible,
                "per_assignment": per_assignment,
            }

    # --- persistence ---

    def _append_log(self, session: Session, record: SubmissionRecord) -> None:
        if self.submission_log is None:
            return
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "session_id": session.id,
            "database_id": session.database_id,
            "assignment_id": record.assignment_id,
            "sql_text": record.sql_text,
            "correct": record.correct,
            "earned_points": record.earned_points,
            "error": record.error,
        }
        line = json.dumps(entry) + "\n"
        with self._log_lock:
            with self.submission_log.open("a", encoding="utf-8") as fh:
                fh.write(line)


def replay_score(log_path: Path | str, session_id: str) -> int:
    """Recompute a session's earned points from the append-only log."""
    earned = 0
    path = Path(log_path)
    if not path.exists():
        return 0
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        entry = json.loads(line)
        if entry.get("session_id") == session_id:
            earned += entry.get("earned_points", 0)
    return earned


def grade_batch(
    service: TutorService,
    database_id: str,
    submissions: list[dict],
) -> list[dict]:
    """Batch grading for the CLI: each submission is {student, assignment, sql}.

    Returns one report row per submission: student, assignment, verdict,
    points.  Unknown assignments raise; syntax errors are verdict "incorrect".
    """
    catalog = service.catalog(database_id)
    pack = {a.id: a for a in service.assignment_packs.get(database_id, [])}
    report = []
    for sub in submissions:
        try:
            assignment = pack[sub["assignment"]]
        except KeyError:
            raise UnknownAssignment(
                f"submission for unknown assignment {sub.get('assignment')!r}"
            ) from None
        try:
            student = execute(desugar_contains(parse_sql(sub["sql"])), catalog)
            reference = execute(
                desugar_contains(parse_sql(assignment.reference_sql)), catalog
            )
            correct = result_equal(student, reference, bag=service.bag_semantics)
        except SqlTutorError:
            correct = False
        report.append({
            "student": sub["student"],
            "assignment": assignment.id,
            "verdict": "correct" if correct else "incorrect",
            "points": assignment.points if correct else 0,
        })
    return report
