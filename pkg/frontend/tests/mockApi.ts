/** An in-memory fake of the tutoring service HTTP API.
 *
 * Routes fetch calls to canned handlers so contract tests exercise the real
 * ApiClient encoding/decoding without a network.
 */

import { ApiClient } from "../src/api.js";

export interface Route {
  method: string;
  path: RegExp;
  handler: (match: RegExpMatchArray, body: any) => { status: number; body: unknown };
}

export function clientFor(routes: Route[]): { client: ApiClient; calls: string[] } {
  const calls: string[] = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${input}`);
    for (const route of routes) {
      const match = input.match(route.path);
      if (match && route.method === method) {
        const body = init?.body ? JSON.parse(init.body as string) : undefined;
        const out = route.handler(match, body);
        return new Response(JSON.stringify(out.body), {
          status: out.status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    throw new Error(`unmocked request: ${method} ${input}`);
  };
  return { client: new ApiClient("", fetchFn), calls };
}

export const TRACKS_TABLE = {
  columns: ["TrackId", "Track"],
  rows: [
    [1479, "Voodoo Child (Slight Return)"],
    [1480, "Little Wing"],
  ],
};

export const ASSIGNMENTS = [
  {
    id: "a1",
    difficulty: 1,
    difficulty_label: "easy",
    prompt_en: "List every track in the database.",
    points: 10,
  },
  {
    id: "a2",
    difficulty: 1,
    difficulty_label: "easy",
    prompt_en: "Show the id and name of every track.",
    points: 10,
  },
];
