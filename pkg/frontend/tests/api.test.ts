import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { clientFor, TRACKS_TABLE } from "./mockApi.js";

describe("ApiClient", () => {
  it("starts a session with the documented request body", async () => {
    let seen: any = null;
    const { client } = clientFor([
      {
        method: "POST",
        path: /^\/sessions$/,
        handler: (_m, body) => {
          seen = body;
          return {
            status: 201,
            body: {
              session_id: "s1",
              mode: body.mode,
              database_id: body.database_id,
              difficulty: body.difficulty,
              earned: 0,
              possible: 0,
            },
          };
        },
      },
    ]);
    const session = await client.startSession("assessment", "music", 2);
    expect(seen).toEqual({ mode: "assessment", database_id: "music", difficulty: 2 });
    expect(session.session_id).toBe("s1");
  });

  it("decodes translate responses", async () => {
    const { client } = clientFor([
      {
        method: "POST",
        path: /^\/sessions\/s1\/translate$/,
        handler: () => ({
          status: 200,
          body: {
            sql_text: "SELECT *\nFROM tracks;",
            result_table: TRACKS_TABLE,
            match_diagnostics: { selected_tables: ["tracks"] },
          },
        }),
      },
    ]);
    const out = await client.translate("s1", "Tracks, please.");
    expect(out.sql_text).toContain("FROM tracks;");
    expect(out.result_table.rows).toHaveLength(2);
  });

  it("raises ApiError with code and hint from error bodies", async () => {
    const { client } = clientFor([
      {
        method: "POST",
        path: /^\/sessions\/s1\/translate$/,
        handler: () => ({
          status: 422,
          body: {
            code: "translation_failed",
            message: "no table name could be matched",
            hint: "Please restate the query using words from the schema.",
          },
        }),
      },
    ]);
    const err = await client.translate("s1", "qwxz").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("translation_failed");
    expect(err.hint).toMatch(/restate/);
    expect(err.status).toBe(422);
  });

  it("only calls the documented endpoints", async () => {
    const { client, calls } = clientFor([
      { method: "GET", path: /^\/databases$/, handler: () => ({ status: 200, body: { databases: ["music"] } }) },
      { method: "GET", path: /^\/sessions\/s1\/score$/, handler: () => ({ status: 200, body: { earned: 0, possible: 0, per_assignment: [] } }) },
    ]);
    await client.listDatabases();
    await client.getScore("s1");
    expect(calls).toEqual(["GET /databases", "GET /sessions/s1/score"]);
  });
});
