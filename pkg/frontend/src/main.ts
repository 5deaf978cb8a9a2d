/** Entry point: prompt for an annotator id once, then boot the app. */

import { ApiClient } from "./api.js";
import { App } from "./ui.js";

const ID_KEY = "ulsa-annotator-id";

function annotatorId(): string {
  const saved = window.localStorage.getItem(ID_KEY);
  if (saved) {
    return saved;
  }
  let entered: string | null = null;
  while (!entered || entered.trim().length === 0) {
    entered = window.prompt("Annotator id (letters/digits, e.g. your initials):");
  }
  const id = entered.trim();
  window.localStorage.setItem(ID_KEY, id);
  return id;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app container");
  }
  const app = new App(root, new ApiClient(), window.localStorage, annotatorId());
  try {
    await app.start();
  } catch (err) {
    root.innerHTML = `<p class="error">failed to start: ${String(err)}.<br>` +
      `Is the annotation server running? Try <code>ulsa serve data.json --static dist</code>.</p>`;
  }
}

void boot();
