/** Bootstrap: mode/database/difficulty chooser, then the matching view. */

import { ApiClient } from "./api.js";
import { AssessmentView, TutorView } from "./views.js";

export async function startApp(
  root: HTMLElement,
  client: ApiClient = new ApiClient(""),
): Promise<void> {
  const { databases } = await client.listDatabases();

  const form = document.createElement("form");
  form.className = "session-form";

  const dbSelect = document.createElement("select");
  dbSelect.className = "db-select";
  for (const id of databases) {
    const opt = document.createElement("option");
    opt.value = id;
    opt.textContent = id;
    dbSelect.appendChild(opt);
  }

  const modeSelect = document.createElement("select");
  modeSelect.className = "mode-select";
  for (const mode of ["tutor", "assessment"]) {
    const opt = document.createElement("option");
    opt.value = mode;
    opt.textContent = mode;
    modeSelect.appendChild(opt);
  }

  const difficultySelect = document.createElement("select");
  difficultySelect.className = "difficulty-select";
  for (const [value, label] of [["1", "easy"], ["2", "medium"], ["3", "hard"]]) {
    const opt = document.createElement("option");
    opt.value = value;
    opt.textContent = label;
    difficultySelect.appendChild(opt);
  }
  difficultySelect.hidden = true;
  modeSelect.addEventListener("change", () => {
    difficultySelect.hidden = modeSelect.value !== "assessment";
  });

  const startButton = document.createElement("button");
  startButton.type = "submit";
  startButton.textContent = "Start session";

  form.append(dbSelect, modeSelect, difficultySelect, startButton);
  root.appendChild(form);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      const mode = modeSelect.value as "tutor" | "assessment";
      const session = await client.startSession(
        mode,
        dbSelect.value,
        mode === "assessment" ? Number(difficultySelect.value) : undefined,
      );
      form.remove();
      if (mode === "tutor") {
        new TutorView(client, session.session_id, root);
      } else {
        const view = new AssessmentView(client, session.session_id, root);
        await view.load();
      }
    })();
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void startApp(document.getElementById("app")!);
}
