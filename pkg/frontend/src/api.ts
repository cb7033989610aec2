/** Typed client for the tutoring service HTTP+JSON API.
 *
 * The UI performs no translation or evaluation of its own: every SQL string,
 * verdict, and score in the views originates from a response of this client.
 */

export interface ResultTable {
  columns: string[];
  rows: (string | number | null)[][];
}

export interface SessionInfo {
  session_id: string;
  mode: "tutor" | "assessment";
  database_id: string;
  difficulty: number | null;
  earned: number;
  possible: number;
}

export interface TranslateResponse {
  sql_text: string;
  result_table: ResultTable;
  match_diagnostics: Record<string, unknown>;
}

export interface Assignment {
  id: string;
  difficulty: number;
  difficulty_label: string;
  prompt_en: string;
  points: number;
}

export interface AnswerResponse {
  correct: boolean;
  earned_points: number;
  expected_shown: boolean;
  error: string | null;
}

export interface ScoreEntry {
  assignment_id: string;
  points: number;
  status: "graded" | "ungraded";
  correct: boolean;
  earned: number;
}

export interface Score {
  earned: number;
  possible: number;
  per_assignment: ScoreEntry[];
}

/** Domain error decoded from an API error body {code, message, hint?}. */
export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly hint?: string,
    public readonly status?: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(
        payload.code ?? "http_error",
        payload.message ?? `request failed with status ${resp.status}`,
        payload.hint,
        resp.status,
      );
    }
    return payload as T;
  }

  listDatabases(): Promise<{ databases: string[] }> {
    return this.request("GET", "/databases");
  }

  getSchema(databaseId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/databases/${databaseId}/schema`);
  }

  startSession(
    mode: "tutor" | "assessment",
    databaseId: string,
    difficulty?: number,
  ): Promise<SessionInfo> {
    return this.request("POST", "/sessions", {
      mode,
      database_id: databaseId,
      difficulty: difficulty ?? null,
    });
  }

  getAssignments(sessionId: string): Promise<{ assignments: Assignment[] }> {
    return this.request("GET", `/sessions/${sessionId}/assignments`);
  }

  translate(sessionId: string, text: string): Promise<TranslateResponse> {
    return this.request("POST", `/sessions/${sessionId}/translate`, { text });
  }

  runSql(sessionId: string, sql: string): Promise<ResultTable> {
    return this.request("POST", `/sessions/${sessionId}/sql`, { sql });
  }

  submitAnswer(
    sessionId: string,
    assignmentId: string,
    sql: string,
  ): Promise<AnswerResponse> {
    return this.request("POST", `/sessions/${sessionId}/answers`, {
      assignment_id: assignmentId,
      sql,
    });
  }

  getScore(sessionId: string): Promise<Score> {
    return this.request("GET", `/sessions/${sessionId}/score`);
  }
}
