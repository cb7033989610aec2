"""English-to-SQL tutoring toolkit.

Submodules: catalog (schemas, data, vocabulary), textpipe (tokenize /
lemmatize / tag), similarity (edit-distance composite), matcher (schema
linking), sqlast + parser (SQL dialect), generator (English -> AST), engine
(evaluator and grading equivalence), service (sessions and scoring), api
(HTTP layer), cli (command line).
"""

from .catalog import DatabaseCatalog, Vocabulary, load_database
from .engine import ResultTable, execute, result_equal
from .errors import SqlTutorError
from .generator import Translation, Translator, translate_text
from .matcher import MatcherConfig, match
from .parser import parse_sql
from .sqlast import Query, desugar_contains, render_sql, structurally_equal
from .textpipe import TextPipeline
from .service import TutorService

__version__ = "0.1.0"

__all__ = [
    "DatabaseCatalog",
    "Vocabulary",
    "load_database",
    "ResultTable",
    "execute",
    "result_equal",
    "SqlTutorError",
    "Translation",
    "Translator",
    "translate_text",
    "MatcherConfig",
    "match",
    "parse_sql",
    "Query",
    "desugar_contains",
    "render_sql",
    "structurally_equal",
    "TextPipeline",
    "TutorService",
    "__version__",
]
