import { beforeEach, describe, expect, it } from "vitest";

import { AssessmentView } from "../src/views.js";
import { ASSIGNMENTS, clientFor, Route } from "./mockApi.js";

/** Stateful mock: grades a1 correct, a2 incorrect, locks duplicates. */
function assessmentRoutes(): Route[] {
  const graded = new Map<string, { correct: boolean; earned: number }>();
  return [
    {
      method: "GET",
      path: /^\/sessions\/s1\/assignments$/,
      handler: () => ({ status: 200, body: { assignments: ASSIGNMENTS } }),
    },
    {
      method: "POST",
      path: /^\/sessions\/s1\/answers$/,
      handler: (_m, body) => {
        if (graded.has(body.assignment_id)) {
          return {
            status: 409,
            body: {
              code: "duplicate_submission",
              message: "assignment has already been graded",
            },
          };
        }
        const isSyntaxError = body.sql.startsWith("SELEKT");
        const correct = body.assignment_id === "a1" && !isSyntaxError;
        graded.set(body.assignment_id, { correct, earned: correct ? 10 : 0 });
        return {
          status: 200,
          body: {
            correct,
            earned_points: correct ? 10 : 0,
            expected_shown: !correct,
            error: isSyntaxError ? "syntax error at line 1" : null,
          },
        };
      },
    },
    {
      method: "GET",
      path: /^\/sessions\/s1\/score$/,
      handler: () => ({
        status: 200,
        body: {
          earned: [...graded.values()].reduce((acc, g) => acc + g.earned, 0),
          possible: 20,
          per_assignment: ASSIGNMENTS.map((a) => ({
            assignment_id: a.id,
            points: a.points,
            status: graded.has(a.id) ? "graded" : "ungraded",
            correct: graded.get(a.id)?.correct ?? false,
            earned: graded.get(a.id)?.earned ?? 0,
          })),
        },
      }),
    },
  ];
}

describe("AssessmentView", () => {
  let host: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "";
    host = document.createElement("div");
    document.body.appendChild(host);
  });

  async function loadedView() {
    const { client } = clientFor(assessmentRoutes());
    const view = new AssessmentView(client, "s1", host);
    await view.load();
    return view;
  }

  it("never renders the natural-language input", async () => {
    await loadedView();
    expect(host.querySelector(".nl-input")).toBeNull();
    expect(host.querySelector(".translate-btn")).toBeNull();
    expect(host.querySelector(".speech-btn")).toBeNull();
    // SQL editors exist, one per assignment
    expect(host.querySelectorAll(".assignment .sql-editor")).toHaveLength(2);
  });

  it("shows prompts with difficulty and points", async () => {
    await loadedView();
    const prompts = [...host.querySelectorAll(".prompt")].map((p) => p.textContent);
    expect(prompts[0]).toContain("easy");
    expect(prompts[0]).toContain("10 pts");
    expect(prompts[0]).toContain("List every track");
  });

  it("correct submission turns the badge green and bumps the score", async () => {
    const view = await loadedView();
    const editor = host.querySelector<HTMLTextAreaElement>(
      '[data-assignment-id="a1"] .sql-editor',
    )!;
    editor.value = "SELECT * FROM tracks;";
    await view.submit("a1");

    const badge = host.querySelector('[data-assignment-id="a1"] .badge')!;
    expect(badge.className).toContain("correct");
    expect(view.scoreHeader.textContent).toBe("Score: 10 / 20");
  });

  it("syntax errors render inline as incorrect-with-reason", async () => {
    const view = await loadedView();
    host.querySelector<HTMLTextAreaElement>(
      '[data-assignment-id="a1"] .sql-editor',
    )!.value = "SELEKT";
    await view.submit("a1");

    const badge = host.querySelector('[data-assignment-id="a1"] .badge')!;
    expect(badge.className).toContain("incorrect");
    expect(badge.textContent).toContain("syntax error");
  });

  it("graded assignments lock their controls", async () => {
    const view = await loadedView();
    await view.submit("a1");
    const button = host.querySelector<HTMLButtonElement>(
      '[data-assignment-id="a1"] .submit-btn',
    )!;
    const editor = host.querySelector<HTMLTextAreaElement>(
      '[data-assignment-id="a1"] .sql-editor',
    )!;
    expect(button.disabled).toBe(true);
    expect(editor.disabled).toBe(true);
  });

  it("shows the final score panel once every assignment is graded", async () => {
    const view = await loadedView();
    expect(view.finalPanel.hidden).toBe(true);
    await view.submit("a1");
    expect(view.finalPanel.hidden).toBe(true);
    await view.submit("a2");
    expect(view.finalPanel.hidden).toBe(false);
    expect(view.finalPanel.textContent).toContain("final score 10 of 20");
  });
});
