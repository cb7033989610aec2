/** Tutor and assessment screens.
 *
 * Both screens are plain-DOM components driven exclusively by the API
 * client.  The assessment screen never creates the natural-language input
 * control: in that mode only the SQL editors exist.
 */

import {
  ApiClient,
  ApiError,
  Assignment,
  ResultTable,
  Score,
} from "./api.js";
import { SpeechCapture, createSpeechCapture } from "./speech.js";

export function renderGrid(table: ResultTable): HTMLTableElement {
  const el = document.createElement("table");
  el.className = "result-grid";
  const head = el.createTHead().insertRow();
  for (const col of table.columns) {
    const th = document.createElement("th");
    th.textContent = col;
    head.appendChild(th);
  }
  const body = el.createTBody();
  for (const row of table.rows) {
    const tr = body.insertRow();
    for (const value of row) {
      tr.insertCell().textContent = value === null ? "" : String(value);
    }
  }
  return el;
}

function errorText(err: unknown): { message: string; hint?: string } {
  if (err instanceof ApiError) return { message: err.message, hint: err.hint };
  return { message: String(err) };
}

export class TutorView {
  readonly root: HTMLElement;
  readonly nlInput: HTMLTextAreaElement;
  readonly translateButton: HTMLButtonElement;
  readonly sqlEditor: HTMLTextAreaElement;
  readonly runButton: HTMLButtonElement;
  readonly banner: HTMLElement;
  readonly gridHost: HTMLElement;
  readonly diagnostics: HTMLElement;
  readonly speechButton: HTMLButtonElement | null = null;
  private busy = false;

  constructor(
    private readonly client: ApiClient,
    private readonly sessionId: string,
    container: HTMLElement,
    speech: SpeechCapture = createSpeechCapture(),
  ) {
    this.root = document.createElement("section");
    this.root.className = "tutor-view";

    this.nlInput = document.createElement("textarea");
    this.nlInput.className = "nl-input";
    this.nlInput.placeholder = "Ask in English…";

    this.translateButton = document.createElement("button");
    this.translateButton.className = "translate-btn";
    this.translateButton.textContent = "Translate & run";
    this.translateButton.addEventListener("click", () => void this.submitText());

    this.sqlEditor = document.createElement("textarea");
    this.sqlEditor.className = "sql-editor";
    this.sqlEditor.placeholder = "Generated SQL appears here; edit and re-run.";

    this.runButton = document.createElement("button");
    this.runButton.className = "run-sql-btn";
    this.runButton.textContent = "Run SQL";
    this.runButton.addEventListener("click", () => void this.runSql());

    this.banner = document.createElement("div");
    this.banner.className = "error-banner";
    this.banner.hidden = true;

    this.gridHost = document.createElement("div");
    this.gridHost.className = "grid-host";

    this.diagnostics = document.createElement("pre");
    this.diagnostics.className = "diagnostics-drawer";
    this.diagnostics.hidden = true;

    this.root.append(this.nlInput, this.translateButton);
    if (speech.supported) {
      const mic = document.createElement("button");
      mic.className = "speech-btn";
      mic.textContent = "🎤 Dictate";
      mic.addEventListener("click", () => {
        speech.start(
          (text) => {
            // insert for confirmation; the user still presses Translate
            this.nlInput.value = text;
          },
          (message) => this.notice(`Speech capture unavailable: ${message}`),
        );
      });
      this.speechButton = mic;
      this.root.append(mic);
    }
    this.root.append(this.banner, this.sqlEditor, this.runButton,
                     this.gridHost, this.diagnostics);
    container.appendChild(this.root);
  }

  private notice(message: string, hint?: string): void {
    this.banner.hidden = false;
    this.banner.textContent = hint ? `${message} — ${hint}` : message;
  }

  private clearNotice(): void {
    this.banner.hidden = true;
    this.banner.textContent = "";
  }

  private showTable(table: ResultTable): void {
    this.gridHost.replaceChildren(renderGrid(table));
  }

  /** One in-flight request per pane; extra clicks are ignored. */
  private async guarded(work: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      await work();
    } finally {
      this.busy = false;
    }
  }

  async submitText(): Promise<void> {
    await this.guarded(async () => {
      this.clearNotice();
      try {
        const out = await this.client.translate(this.sessionId, this.nlInput.value);
        this.sqlEditor.value = out.sql_text;
        this.showTable(out.result_table);
        this.diagnostics.hidden = false;
        this.diagnostics.textContent = JSON.stringify(out.match_diagnostics, null, 2);
      } catch (err) {
        const { message, hint } = errorText(err);
        // restate banner; the typed text stays put for editing
        this.notice(message, hint);
      }
    });
  }

  async runSql(): Promise<void> {
    await this.guarded(async () => {
      this.clearNotice();
      try {
        const table = await this.client.runSql(this.sessionId, this.sqlEditor.value);
        this.showTable(table);
      } catch (err) {
        const { message, hint } = errorText(err);
        this.notice(message, hint);
      }
    });
  }
}

export class AssessmentView {
  readonly root: HTMLElement;
  readonly scoreHeader: HTMLElement;
  readonly list: HTMLElement;
  readonly finalPanel: HTMLElement;
  private readonly editors = new Map<string, HTMLTextAreaElement>();
  private readonly buttons = new Map<string, HTMLButtonElement>();
  private readonly badges = new Map<string, HTMLElement>();
  private busy = false;

  constructor(
    private readonly client: ApiClient,
    private readonly sessionId: string,
    container: HTMLElement,
  ) {
    this.root = document.createElement("section");
    this.root.className = "assessment-view";
    this.scoreHeader = document.createElement("header");
    this.scoreHeader.className = "score-header";
    this.list = document.createElement("ul");
    this.list.className = "assignment-list";
    this.finalPanel = document.createElement("div");
    this.finalPanel.className = "final-score-panel";
    this.finalPanel.hidden = true;
    this.root.append(this.scoreHeader, this.list, this.finalPanel);
    container.appendChild(this.root);
  }

  async load(): Promise<void> {
    const { assignments } = await this.client.getAssignments(this.sessionId);
    this.list.replaceChildren();
    for (const a of assignments) {
      this.list.appendChild(this.renderAssignment(a));
    }
    await this.refreshScore();
  }

  private renderAssignment(a: Assignment): HTMLElement {
    const item = document.createElement("li");
    item.className = "assignment";
    item.dataset.assignmentId = a.id;

    const prompt = document.createElement("p");
    prompt.className = "prompt";
    prompt.textContent = `[${a.difficulty_label}, ${a.points} pts] ${a.prompt_en}`;

    const editor = document.createElement("textarea");
    editor.className = "sql-editor";
    this.editors.set(a.id, editor);

    const submit = document.createElement("button");
    submit.className = "submit-btn";
    submit.textContent = "Submit answer";
    submit.addEventListener("click", () => void this.submit(a.id));
    this.buttons.set(a.id, submit);

    const badge = document.createElement("span");
    badge.className = "badge pending";
    badge.textContent = "not graded";
    this.badges.set(a.id, badge);

    item.append(prompt, editor, submit, badge);
    return item;
  }

  async submit(assignmentId: string): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      const editor = this.editors.get(assignmentId)!;
      const badge = this.badges.get(assignmentId)!;
      const button = this.buttons.get(assignmentId)!;
      try {
        const verdict = await this.client.submitAnswer(
          this.sessionId, assignmentId, editor.value,
        );
        if (verdict.correct) {
          badge.className = "badge correct";
          badge.textContent = `correct (+${verdict.earned_points})`;
        } else {
          badge.className = "badge incorrect";
          badge.textContent = verdict.error
            ? `incorrect — ${verdict.error}`
            : "incorrect";
        }
        // graded once: lock the controls
        button.disabled = true;
        editor.disabled = true;
      } catch (err) {
        const { message, hint } = errorText(err);
        badge.className = "badge error";
        badge.textContent = hint ? `${message} — ${hint}` : message;
        if (err instanceof ApiError && err.code === "duplicate_submission") {
          button.disabled = true;
          editor.disabled = true;
        }
      }
      await this.refreshScore();
    } finally {
      this.busy = false;
    }
  }

  private async refreshScore(): Promise<void> {
    const score: Score = await this.client.getScore(this.sessionId);
    this.scoreHeader.textContent = `Score: ${score.earned} / ${score.possible}`;
    const done = score.per_assignment.length > 0 &&
      score.per_assignment.every((e) => e.status === "graded");
    this.finalPanel.hidden = !done;
    if (done) {
      this.finalPanel.textContent =
        `Session complete — final score ${score.earned} of ${score.possible}.`;
    }
  }
}
