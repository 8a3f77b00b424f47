// Candidate listing: the program as one line per token, each line carrying
// the rendered value of that prefix as a trailing comment, one comment per
// example. Mirrors the debug presentation of the synthesizer itself.

import type { SessionView } from "./api";
import type { Span } from "./selection";

export type LineComment = { text: string; truncated: boolean };

export type CandidateLine = {
  kind: "input" | "token";
  // Index into the view's token list; null for the input header line.
  tokenIndex: number | null;
  code: string;
  comments: LineComment[];
  isError: boolean;
  dimmed: boolean;
};

// Error values render as "Kind" or "Kind: message"; data values never do
// (strings are quoted, so a string "TypeError" renders as "\"TypeError\"").
const ERROR_HEAD = /^(TypeError|RuntimeError|Timeout)(:|$)/;

export function buildLines(view: SessionView): CandidateLine[] {
  const tokens = view.tokens;
  if (!Array.isArray(tokens)) {
    throw new Error("candidate payload has no token list");
  }
  const traces = view.traces ?? [];

  const lines: CandidateLine[] = [
    { kind: "input", tokenIndex: null, code: "input", comments: [], isError: false, dimmed: false },
  ];
  for (const t of tokens) {
    lines.push({
      kind: "token",
      tokenIndex: t.index,
      code: "." + t.display,
      comments: [],
      isError: false,
      dimmed: false,
    });
  }

  // The value of the length-k prefix lands on line k; line 0 is the bare
  // input. A trace that stopped early ended on its error step.
  let earliestStop = Infinity;
  for (const trace of traces) {
    if (!Array.isArray(trace.steps) || trace.steps.length === 0) {
      throw new Error("trace block has no steps");
    }
    for (const step of trace.steps) {
      const line = lines[step.prefix_len];
      if (line === undefined || typeof step.rendered !== "string") {
        throw new Error(`trace step at prefix ${step.prefix_len} does not fit the program`);
      }
      line.comments.push({ text: step.rendered, truncated: step.truncated === true });
    }
    const last = trace.steps[trace.steps.length - 1];
    if (last === undefined) continue;
    const errored = trace.steps.length < tokens.length + 1 || ERROR_HEAD.test(last.rendered);
    if (errored) {
      const line = lines[last.prefix_len];
      if (line !== undefined) line.isError = true;
      earliestStop = Math.min(earliestStop, last.prefix_len);
    }
  }

  // Lines past an error stop that no trace reached carry no information.
  lines.forEach((line, k) => {
    line.dimmed = line.comments.length === 0 && k > earliestStop;
  });
  return lines;
}

function renderLine(line: CandidateLine, codeWidth: number, selected: Span | null): HTMLElement {
  const el = document.createElement("div");
  el.className = `line kind-${line.kind}`;
  if (line.isError) el.classList.add("error-step");
  if (line.dimmed) el.classList.add("dimmed");
  if (
    line.tokenIndex !== null &&
    selected !== null &&
    line.tokenIndex >= selected.start &&
    line.tokenIndex <= selected.end
  ) {
    el.classList.add("selected");
  }
  if (line.tokenIndex !== null) {
    el.dataset.tokenIndex = String(line.tokenIndex);
  }

  const code = document.createElement("span");
  code.className = "code";
  code.textContent = line.code.padEnd(codeWidth);
  el.appendChild(code);

  for (const comment of line.comments) {
    el.appendChild(document.createTextNode(" "));
    const span = document.createElement("span");
    span.className = comment.truncated ? "comment truncated" : "comment";
    span.textContent = "//" + comment.text;
    el.appendChild(span);
    if (comment.truncated) {
      const marker = document.createElement("span");
      marker.className = "trunc-marker";
      marker.title = "value truncated to fit";
      marker.textContent = "⋯";
      el.appendChild(marker);
    }
  }
  return el;
}

export function renderCandidate(view: SessionView, selected: Span | null = null): HTMLElement {
  const container = document.createElement("div");
  container.className = "candidate";

  let lines: CandidateLine[];
  try {
    lines = buildLines(view);
  } catch (err) {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `cannot display candidate: ${err instanceof Error ? err.message : String(err)}`;
    container.appendChild(banner);
    return container;
  }

  const codeWidth = Math.max(...lines.map((l) => l.code.length)) + 2;
  const listing = document.createElement("pre");
  listing.className = "listing";
  for (const line of lines) {
    listing.appendChild(renderLine(line, codeWidth, selected));
  }
  container.appendChild(listing);
  return container;
}
