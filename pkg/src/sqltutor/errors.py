"""Exception hierarchy shared by every layer.

Each error carries a short machine-readable ``code`` so the HTTP layer and the
CLI can map failures to structured responses without string matching.
"""


class SqlTutorError(Exception):
    code = "error"

    def __init__(self, message: str, hint: str | None = None):
        super().__init__(message)
        self.message = message
        self.hint = hint


# --- catalog loading ---

class SchemaParseError(SqlTutorError):
    code = "schema_parse_error"


class DataFileMissing(SqlTutorError):
    code = "data_file_missing"


class RowArityMismatch(SqlTutorError):
    code = "row_arity_mismatch"


class PrimaryKeyViolation(SqlTutorError):
    code = "primary_key_violation"


# --- text pipeline ---

class EmptyQuery(SqlTutorError):
    code = "empty_query"


# --- similarity ---

class BothEmpty(SqlTutorError):
    code = "both_empty"


class EmptyFirstArgument(SqlTutorError):
    code = "empty_first_argument"


# --- matching / translation ---

RESTATE_HINT = "Could not map the question to this database; please restate the query differently."


class NoTableMatch(SqlTutorError):
    code = "no_table_match"

    def __init__(self, message: str = "no table name could be matched"):
        super().__init__(message, hint=RESTATE_HINT)


class UnboundLiteral(SqlTutorError):
    code = "unbound_literal"

    def __init__(self, message: str):
        super().__init__(message, hint=RESTATE_HINT)


class AmbiguousLiteral(SqlTutorError):
    code = "ambiguous_literal"

    def __init__(self, message: str):
        super().__init__(message, hint=RESTATE_HINT)


class TranslationFailed(SqlTutorError):
    code = "translation_failed"

    def __init__(self, message: str, cause: SqlTutorError | None = None):
        super().__init__(message, hint=RESTATE_HINT)
        self.cause = cause


# --- SQL parsing / execution ---

class SqlSyntaxError(SqlTutorError):
    code = "syntax_error"

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = expected

    def __str__(self):
        loc = f"line {self.line}, column {self.column}"
        if self.expected:
            return f"{self.message} at {loc} (expected {', '.join(self.expected)})"
        return f"{self.message} at {loc}"


class UnknownTable(SqlTutorError):
    code = "unknown_table"


class UnknownColumn(SqlTutorError):
    code = "unknown_column"


class TypeMismatch(SqlTutorError):
    code = "type_mismatch"


# --- sessions / grading ---

class UnknownDatabase(SqlTutorError):
    code = "unknown_database"


class UnknownSession(SqlTutorError):
    code = "unknown_session"


class UnknownAssignment(SqlTutorError):
    code = "unknown_assignment"


class MissingDifficulty(SqlTutorError):
    code = "missing_difficulty"


class ModeViolation(SqlTutorError):
    code = "mode_violation"


class DuplicateSubmission(SqlTutorError):
    code = "duplicate_submission"
