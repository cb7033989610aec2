"""HTTP+JSON API over the tutoring service.

Endpoints:
  POST /sessions                       start a session
  GET  /databases                      list database ids
  GET  /databases/{id}/schema          schema document
  GET  /sessions/{id}/assignments      assignments preloaded for the session
  POST /sessions/{id}/translate        English -> SQL -> results
  POST /sessions/{id}/sql              run raw SQL (tutor mode)
  POST /sessions/{id}/answers          grade a submission (assessment mode)
  GET  /sessions/{id}/score            score snapshot

Errors are returned as {"code", "message", "hint"?}; result tables as
{"columns": [...], "rows": [[...]]}.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import SqlTutorError
from .service import TutorService

ERROR_STATUS = {
    "unknown_database": 404,
    "unknown_session": 404,
    "unknown_assignment": 404,
    "unknown_table": 400,
    "unknown_column": 400,
    "missing_difficulty": 422,
    "mode_violation": 409,
    "duplicate_submission": 409,
    "translation_failed": 422,
    "syntax_error": 400,
    "type_mismatch": 400,
    "empty_query": 422,
}


class StartSessionRequest(BaseModel):
    mode: str = Field(pattern="^(tutor|assessment)$")
    database_id: str
    difficulty: int | None = None


class TranslateRequest(BaseModel):
    text: str


class SqlRequest(BaseModel):
    sql: str


class AnswerRequest(BaseModel):
    assignment_id: str
    sql: str


class SessionResponse(BaseModel):
    session_id: str
    mode: str
    database_id: str
    difficulty: int | None
    earned: int
    possible: int


class ResultTableModel(BaseModel):
    columns: list[str]
    rows: list[list[str | int | float | None]]


class TranslateResponse(BaseModel):
    sql_text: str
    result_table: ResultTableModel
    match_diagnostics: dict


class AnswerResponse(BaseModel):
    correct: bool
    earned_points: int
    expected_shown: bool
    error: str | None = None


class AssignmentModel(BaseModel):
    id: str
    difficulty: int
    difficulty_label: str
    prompt_en: str
    points: int


class ScoreEntry(BaseModel):
    assignment_id: str
    points: int
    status: str
    correct: bool
    earned: int


class ScoreResponse(BaseModel):
    earned: int
    possible: int
    per_assignment: list[ScoreEntry]


def create_app(service: TutorService | None = None) -> FastAPI:
    service = service or TutorService()
    app = FastAPI(title="SQL tutoring service")
    app.state.service = service

    @app.exception_handler(SqlTutorError)
    async def handle_domain_error(request: Request, exc: SqlTutorError):
        body = {"code": exc.code, "message": exc.message}
        if exc.hint:
            body["hint"] = exc.hint
        return JSONResponse(status_code=ERROR_STATUS.get(exc.code, 400), content=body)

    def session_payload(session) -> SessionResponse:
        return SessionResponse(
            session_id=session.id,
            mode=session.mode,
            database_id=session.database_id,
            difficulty=session.difficulty,
            earned=session.earned,
            possible=session.possible,
        )

    @app.get("/databases")
    def list_databases() -> dict:
        return {"databases": service.database_ids()}

    @app.get("/databases/{database_id}/schema")
    def database_schema(database_id: str) -> dict:
        return service.schema_doc(database_id)

    @app.post("/sessions", status_code=201)
    def start_session(req: StartSessionRequest) -> SessionResponse:
        session = service.start_session(req.mode, req.database_id, req.difficulty)
        return session_payload(session)

    @app.get("/sessions/{session_id}/assignments")
    def session_assignments(session_id: str) -> dict:
        assignments = service.assignments_for(session_id)
        return {
            "assignments": [
                AssignmentModel(
                    id=a.id,
                    difficulty=a.difficulty,
                    difficulty_label=a.difficulty_label,
                    prompt_en=a.prompt_en,
                    points=a.points,
                ).model_dump()
                for a in assignments
            ]
        }

    @app.post("/sessions/{session_id}/translate")
    def translate(session_id: str, req: TranslateRequest) -> TranslateResponse:
        out = service.translate_and_run(session_id, req.text)
        return TranslateResponse(
            sql_text=out["sql_text"],
            result_table=ResultTableModel(**out["result_table"].to_json()),
            match_diagnostics=out["match_diagnostics"],
        )

    @app.post("/sessions/{session_id}/sql")
    def run_sql(session_id: str, req: SqlRequest) -> ResultTableModel:
        result = service.run_sql(session_id, req.sql)
        return ResultTableModel(**result.to_json())

    @app.post("/sessions/{session_id}/answers")
    def submit_answer(session_id: str, req: AnswerRequest) -> AnswerResponse:
        out = service.submit_answer(session_id, req.assignment_id, req.sql)
        return AnswerResponse(**out)

    @app.get("/sessions/{session_id}/score")
    def score(session_id: str) -> ScoreResponse:
        return ScoreResponse(**service.get_score(session_id))

    return app


app = create_app()
