// Screen wiring: task list, live session view, and the feedback loop.
// All synthesis state lives on the server; this module only holds the
// current view, the line selection, and unsent form text.

import { ApiClient, ApiError, RequestGate } from "./api";
import type { SessionView, WirePredicate } from "./api";
import { renderCandidate } from "./render";
import { availableActions, SelectionModel, selectionToPredicate } from "./selection";
import type { SpanAction } from "./selection";

export type Nav = {
  getHash(): string;
  setHash(hash: string): void;
};

const windowNav = (): Nav => ({
  getHash: () => window.location.hash,
  setHash: (hash) => {
    window.location.hash = hash;
  },
});

const newKey = (): string =>
  typeof crypto !== "undefined" && "randomUUID" in crypto
    ? crypto.randomUUID()
    : Math.random().toString(36).slice(2) + Date.now().toString(36);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

const ACTION_LABELS: Record<SpanAction, string> = {
  remove: "Remove",
  retain: "Retain",
  affix: "Affix",
};

type ConflictPlace = "selection" | "example";

// ---------------------------
// Session screen
// ---------------------------

export class SessionScreen {
  view: SessionView;

  private readonly selection = new SelectionModel();
  private readonly gate = new RequestGate();
  private conflict: { place: ConflictPlace; message: string } | null = null;
  private failure: string | null = null;
  private draft = { input: "", output: "" };
  private action: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    view: SessionView,
  ) {
    this.view = view;
    this.render();
  }

  // Resolves once the in-flight request (if any) has settled and the
  // screen has re-rendered.
  whenIdle(): Promise<void> {
    return this.action;
  }

  // One server call at a time. The screen repaints immediately so every
  // control is disabled while the call is pending, then repaints again
  // with the outcome.
  private submit(place: ConflictPlace | null, fn: () => Promise<SessionView>): void {
    if (this.gate.busy) return;
    this.action = this.gate
      .run(fn)
      .then((view) => {
        this.view = view;
        this.conflict = null;
        this.failure = null;
        this.selection.clear();
        if (place === "example") this.draft = { input: "", output: "" };
      })
      .catch((err: unknown) => {
        if (err instanceof ApiError && place !== null && (err.status === 409 || err.status === 422)) {
          // Contradictory or malformed feedback: the session is untouched,
          // so keep the selection and point at it.
          this.conflict = { place, message: err.detail };
        } else {
          this.failure = err instanceof ApiError ? err.detail : String(err);
        }
      })
      .then(() => this.render());
    this.render();
  }

  private applySelection(action: SpanAction): void {
    const span = this.selection.span;
    const tokens = this.view.tokens;
    if (span === null || tokens === null) return;
    let predicate: WirePredicate;
    try {
      predicate = selectionToPredicate(
        { startTokenIndex: span.start, endTokenIndex: span.end, chosenAction: action },
        tokens,
      );
    } catch (err) {
      this.conflict = {
        place: "selection",
        message: err instanceof Error ? err.message : String(err),
      };
      this.render();
      return;
    }
    this.submit("selection", () =>
      this.client.submitFeedback(this.view.session_id, [predicate], newKey()),
    );
  }

  private addExample(): void {
    const input = this.draft.input.trim();
    const output = this.draft.output.trim();
    if (!input || !output) {
      this.conflict = { place: "example", message: "both input and output literals are required" };
      this.render();
      return;
    }
    this.submit("example", () =>
      this.client.submitFeedback(this.view.session_id, [{ kind: "example", input, output }], newKey()),
    );
  }

  // ---------------------------
  // Rendering
  // ---------------------------

  private render(): void {
    const busy = this.gate.busy;
    this.root.replaceChildren();
    this.root.classList.toggle("busy", busy);

    const header = el("header", "session-header");
    header.appendChild(el("h1", "task-id", this.view.task_id));
    header.appendChild(el("code", "session-id", this.view.session_id));
    header.appendChild(el("span", `status status-${this.view.status}`, this.view.status));
    header.appendChild(el("span", "iteration", `iteration ${this.view.iteration_index}`));
    this.root.appendChild(header);

    if (this.failure !== null) {
      this.root.appendChild(el("div", "error-banner", this.failure));
    }

    switch (this.view.status) {
      case "active":
        this.renderActive(busy);
        break;
      case "exhausted":
        this.renderExhausted(busy);
        break;
      case "accepted":
        this.renderAccepted();
        break;
      case "abandoned":
        this.root.appendChild(el("p", "closed-note", "session abandoned"));
        break;
    }

    const footer = el("footer", "session-footer");
    const log = el("a", "log-link", "transcript");
    log.href = this.client.logUrl(this.view.session_id);
    footer.appendChild(log);
    this.root.appendChild(footer);
  }

  private renderActive(busy: boolean): void {
    const tokens = this.view.tokens ?? [];
    const candidate = renderCandidate(this.view, this.selection.span);
    candidate.querySelectorAll<HTMLElement>(".line.kind-token").forEach((lineEl) => {
      lineEl.addEventListener("click", (ev) => {
        if (this.gate.busy) return;
        const index = Number(lineEl.dataset.tokenIndex);
        this.selection.click(index, ev.shiftKey, tokens.length);
        this.conflict = null;
        this.render();
      });
    });
    candidate.querySelector(".line.kind-input")?.addEventListener("click", () => {
      if (this.gate.busy) return;
      this.selection.clear();
      this.render();
    });
    this.root.appendChild(candidate);

    this.root.appendChild(this.renderSelectionBar(busy, tokens.length));
    this.root.appendChild(this.renderExampleForm(busy));
    const counts = this.renderCounts();
    if (counts !== null) this.root.appendChild(counts);
    this.root.appendChild(this.renderControls(busy));
  }

  private renderSelectionBar(busy: boolean, programLength: number): HTMLElement {
    const bar = el("div", "selection-bar");
    const span = this.selection.span;
    if (span === null) {
      bar.appendChild(
        el("span", "selection-hint", "click a program line to select it, shift+click to extend"),
      );
      return bar;
    }
    const count = span.end - span.start + 1;
    bar.appendChild(el("span", "span-size", `${count} line${count === 1 ? "" : "s"} selected`));
    for (const action of availableActions(span, programLength)) {
      const btn = el("button", `span-action span-action-${action}`, ACTION_LABELS[action]);
      btn.dataset.action = action;
      btn.disabled = busy;
      btn.addEventListener("click", () => this.applySelection(action));
      bar.appendChild(btn);
    }
    const clear = el("button", "span-clear", "Clear");
    clear.disabled = busy;
    clear.addEventListener("click", () => {
      this.selection.clear();
      this.conflict = null;
      this.render();
    });
    bar.appendChild(clear);
    if (this.conflict !== null && this.conflict.place === "selection") {
      bar.appendChild(el("div", "conflict", this.conflict.message));
    }
    return bar;
  }

  private renderExampleForm(busy: boolean): HTMLElement {
    const form = el("div", "example-form");
    form.appendChild(el("span", "form-label", "add example"));

    const input = el("input", "example-input");
    input.type = "text";
    input.placeholder = '"cababc"';
    input.value = this.draft.input;
    input.disabled = busy;
    input.addEventListener("input", () => {
      this.draft.input = input.value;
    });
    form.appendChild(input);

    form.appendChild(el("span", "arrow", "→"));

    const output = el("input", "example-output");
    output.type = "text";
    output.placeholder = '"ab"';
    output.value = this.draft.output;
    output.disabled = busy;
    output.addEventListener("input", () => {
      this.draft.output = output.value;
    });
    form.appendChild(output);

    const add = el("button", "add-example", "Add example");
    add.disabled = busy;
    add.addEventListener("click", () => this.addExample());
    form.appendChild(add);

    form.appendChild(
      el("span", "hint", 'literals as displayed: "text", 7, \'c\', List(1,2), ("a",1), Map("k"->1)'),
    );
    if (this.conflict !== null && this.conflict.place === "example") {
      form.appendChild(el("div", "conflict", this.conflict.message));
    }
    return form;
  }

  private renderCounts(): HTMLElement | null {
    const counts = this.view.space_counts;
    if (counts === null) return null;
    const dl = el("dl", "space-counts");
    const pairs: Array<[string, number]> = [
      ["well-typed programs", counts.total_wellformed],
      ["matching the examples", counts.matching_examples],
      ["matching all feedback", counts.matching_all],
    ];
    for (const [label, value] of pairs) {
      dl.appendChild(el("dt", undefined, label));
      dl.appendChild(el("dd", undefined, String(value)));
    }
    return dl;
  }

  private renderControls(busy: boolean): HTMLElement {
    const row = el("div", "controls");

    const accept = el("button", "accept", "Accept");
    accept.disabled = busy;
    accept.addEventListener("click", () =>
      this.submit(null, () => this.client.accept(this.view.session_id)),
    );
    row.appendChild(accept);

    if (this.view.allow_reject) {
      const reject = el("button", "reject", "Reject");
      reject.disabled = busy;
      reject.addEventListener("click", () =>
        this.submit(null, () => this.client.submitFeedback(this.view.session_id, [], newKey())),
      );
      row.appendChild(reject);
    }

    row.appendChild(this.closingButton("restart", "Restart", busy));
    row.appendChild(this.closingButton("abandon", "Abandon", busy));
    return row;
  }

  private closingButton(kind: "restart" | "abandon", label: string, busy: boolean): HTMLElement {
    const btn = el("button", kind, label);
    btn.disabled = busy;
    btn.addEventListener("click", () =>
      this.submit(null, () =>
        kind === "restart"
          ? this.client.restart(this.view.session_id)
          : this.client.abandon(this.view.session_id),
      ),
    );
    return btn;
  }

  private renderExhausted(busy: boolean): void {
    const panel = el("div", "exhausted-panel");
    panel.appendChild(
      el("p", "exhausted-note", "no remaining candidate satisfies all the feedback"),
    );
    const counts = this.renderCounts();
    if (counts !== null) panel.appendChild(counts);
    const choice = el("div", "exhausted-choice");
    choice.appendChild(this.closingButton("restart", "Restart from the seed examples", busy));
    choice.appendChild(this.closingButton("abandon", "Abandon the session", busy));
    panel.appendChild(choice);
    this.root.appendChild(panel);
  }

  private renderAccepted(): void {
    const panel = el("div", "final");
    panel.appendChild(el("p", "final-note", "accepted program"));
    panel.appendChild(el("pre", "final-program", this.view.accepted_program ?? ""));
    this.root.appendChild(panel);
  }
}

// ---------------------------
// Task list and entry point
// ---------------------------

type TaskRow = {
  task_id: string;
  name: string;
  description: string;
  letters: number;
  initial_examples: number;
  max_length: number;
};

export function renderTaskList(
  root: HTMLElement,
  client: ApiClient,
  nav: Nav,
  tasks: TaskRow[],
): void {
  root.replaceChildren();
  const header = el("header", "app-header");
  header.appendChild(el("h1", undefined, "pipesynth"));
  header.appendChild(el("p", "subtitle", "pick a task to start an interactive session"));
  root.appendChild(header);

  const banner = el("div", "error-banner");
  banner.hidden = true;
  root.appendChild(banner);

  const list = el("div", "task-list");
  for (const task of tasks) {
    const card = el("div", "task-card");
    card.dataset.taskId = task.task_id;
    card.appendChild(el("h2", "task-name", task.name));
    card.appendChild(el("code", "task-id", task.task_id));
    card.appendChild(el("p", "task-desc", task.description));
    card.appendChild(
      el(
        "span",
        "task-meta",
        `${task.letters} letters, ${task.initial_examples} seed example${task.initial_examples === 1 ? "" : "s"}, max length ${task.max_length}`,
      ),
    );
    const start = el("button", "start-task", "Start session");
    start.addEventListener("click", () => {
      start.disabled = true;
      client
        .createSession(task.task_id)
        .then((view) => {
          nav.setHash(`#/s/${encodeURIComponent(view.session_id)}`);
          new SessionScreen(root, client, view);
        })
        .catch((err: unknown) => {
          start.disabled = false;
          banner.hidden = false;
          banner.textContent = err instanceof ApiError ? err.detail : String(err);
        });
    });
    card.appendChild(start);
    list.appendChild(card);
  }
  root.appendChild(list);
}

// Entry: a #/s/<session_id> hash resumes that session from the server,
// anything else shows the task list. Returns the screen when one was
// mounted so callers (and tests) can drive it.
export async function mountApp(
  root: HTMLElement,
  client: ApiClient,
  nav: Nav = windowNav(),
): Promise<SessionScreen | null> {
  const match = nav.getHash().match(/^#\/s\/(.+)$/);
  if (match !== null && match[1] !== undefined) {
    const view = await client.getSession(decodeURIComponent(match[1]));
    return new SessionScreen(root, client, view);
  }
  const tasks = await client.listTasks();
  renderTaskList(root, client, nav, tasks);
  return null;
}
