import { describe, expect, it } from "vitest";

import type { ExampleTrace, SessionView, TokenSpan } from "../src/api";
import { buildLines, renderCandidate } from "../src/render";
import { makeView } from "./mockServer";

const tokens = (ids: string[]): TokenSpan[] =>
  ids.map((token_id, index) => ({ index, token_id, display: token_id }));

// Trace of input.zip(input.tail).take(2).map(p => p._1.toString + p._2).max
// on the bigram walkthrough input, captured verbatim from the service at
// width 45. The second step is wide enough to get cut.
const Q3_TRACE: ExampleTrace = {
  input: '"abdfibfcfdebdfdebdihgfkjfdebd"',
  expected_output: '"bd"',
  steps: [
    { prefix_len: 0, rendered: '"abdfibfcfdebdfdebdihgfkjfdebd"', truncated: false },
    { prefix_len: 1, rendered: "List((a,b),(b,d),(d,f),(f,i),(i,b),(b,f),...)", truncated: true },
    { prefix_len: 2, rendered: "List((a,b),(b,d))", truncated: false },
    { prefix_len: 3, rendered: 'List("ab","bd")', truncated: false },
    { prefix_len: 4, rendered: '"bd"', truncated: false },
  ],
};

const Q3_VIEW: SessionView = makeView({
  program_text: "input.zip(input.tail).take(2).map(p => p._1.toString + p._2).max",
  tokens: tokens(["zip(input.tail)", "take(2)", "map(p => p._1.toString + p._2)", "max"]),
  traces: [Q3_TRACE],
});

// input.tail.tail.head on "a": the second tail hits the empty string, so
// the trace stops there and the head line never gets a value.
const ERROR_VIEW: SessionView = makeView({
  program_text: "input.tail.tail.head",
  tokens: tokens(["tail", "tail", "head"]),
  traces: [
    {
      input: '"a"',
      expected_output: '"x"',
      steps: [
        { prefix_len: 0, rendered: '"a"', truncated: false },
        { prefix_len: 1, rendered: '""', truncated: false },
        { prefix_len: 2, rendered: "RuntimeError: tail of empty sequence", truncated: false },
      ],
    },
  ],
});

describe("buildLines", () => {
  it("produces one line per token plus the input header", () => {
    const lines = buildLines(Q3_VIEW);
    expect(lines).toHaveLength(5);
    expect(lines.map((l) => l.code)).toEqual([
      "input",
      ".zip(input.tail)",
      ".take(2)",
      ".map(p => p._1.toString + p._2)",
      ".max",
    ]);
    expect(lines.map((l) => l.kind)).toEqual(["input", "token", "token", "token", "token"]);
    expect(lines.map((l) => l.tokenIndex)).toEqual([null, 0, 1, 2, 3]);
  });

  it("attaches each prefix value to its line", () => {
    const lines = buildLines(Q3_VIEW);
    const steps = Q3_TRACE.steps;
    lines.forEach((line, k) => {
      expect(line.comments).toHaveLength(1);
      expect(line.comments[0]?.text).toBe(steps[k]?.rendered);
      expect(line.comments[0]?.truncated).toBe(steps[k]?.truncated);
    });
    expect(lines.every((l) => !l.isError && !l.dimmed)).toBe(true);
  });

  it("marks the error step and dims the unreached lines", () => {
    const lines = buildLines(ERROR_VIEW);
    expect(lines.map((l) => l.isError)).toEqual([false, false, true, false]);
    expect(lines.map((l) => l.dimmed)).toEqual([false, false, false, true]);
    expect(lines[3]?.comments).toEqual([]);
  });

  it("flags an error on the final step even when the trace is full length", () => {
    const view = makeView({
      tokens: tokens(["head"]),
      traces: [
        {
          input: '""',
          expected_output: '"x"',
          steps: [
            { prefix_len: 0, rendered: '""', truncated: false },
            { prefix_len: 1, rendered: "RuntimeError: head of empty sequence", truncated: false },
          ],
        },
      ],
    });
    const lines = buildLines(view);
    expect(lines[1]?.isError).toBe(true);
    expect(lines.some((l) => l.dimmed)).toBe(false);
  });

  it("does not mistake a quoted string for an error", () => {
    const view = makeView({
      tokens: tokens(["mkString"]),
      traces: [
        {
          input: '"x"',
          expected_output: '"TypeError"',
          steps: [
            { prefix_len: 0, rendered: '"x"', truncated: false },
            { prefix_len: 1, rendered: '"TypeError"', truncated: false },
          ],
        },
      ],
    });
    expect(buildLines(view).some((l) => l.isError)).toBe(false);
  });

  it("collects one comment per example in trace order", () => {
    const view = makeView({
      tokens: tokens(["sorted"]),
      traces: [
        {
          input: '"ba"',
          expected_output: '"ab"',
          steps: [
            { prefix_len: 0, rendered: '"ba"', truncated: false },
            { prefix_len: 1, rendered: '"ab"', truncated: false },
          ],
        },
        {
          input: '"dc"',
          expected_output: '"cd"',
          steps: [
            { prefix_len: 0, rendered: '"dc"', truncated: false },
            { prefix_len: 1, rendered: '"cd"', truncated: false },
          ],
        },
      ],
    });
    const lines = buildLines(view);
    expect(lines[1]?.comments.map((c) => c.text)).toEqual(['"ab"', '"cd"']);
  });

  it("renders the empty program as the input line alone", () => {
    const view = makeView({
      program_text: "input",
      tokens: [],
      traces: [
        {
          input: '"ab"',
          expected_output: '"ab"',
          steps: [{ prefix_len: 0, rendered: '"ab"', truncated: false }],
        },
      ],
    });
    const lines = buildLines(view);
    expect(lines).toHaveLength(1);
    expect(lines[0]?.code).toBe("input");
    expect(lines[0]?.comments.map((c) => c.text)).toEqual(['"ab"']);
  });

  it("throws on payloads whose steps do not fit the program", () => {
    const view = makeView({
      tokens: tokens(["sorted"]),
      traces: [
        {
          input: '"ab"',
          expected_output: '"ab"',
          steps: [{ prefix_len: 9, rendered: '"ab"', truncated: false }],
        },
      ],
    });
    expect(() => buildLines(view)).toThrow(/does not fit/);
    expect(() => buildLines(makeView({ tokens: null }))).toThrow(/no token list/);
  });
});

describe("renderCandidate", () => {
  it("lays the q3 payload out as five lines with trailing comments", () => {
    const root = renderCandidate(Q3_VIEW);
    const lines = [...root.querySelectorAll(".line")];
    expect(lines).toHaveLength(5);
    const first = lines[0];
    const second = lines[1];
    expect(first?.querySelector(".code")?.textContent?.trimEnd()).toBe("input");
    expect(first?.querySelector(".comment")?.textContent).toBe(
      '//"abdfibfcfdebdfdebdihgfkjfdebd"',
    );
    expect(second?.querySelector(".comment")?.textContent).toBe(
      "//List((a,b),(b,d),(d,f),(f,i),(i,b),(b,f),...)",
    );
  });

  it("marks truncated values and only those", () => {
    const root = renderCandidate(Q3_VIEW);
    const markers = [...root.querySelectorAll(".trunc-marker")];
    expect(markers).toHaveLength(1);
    expect(markers[0]?.closest(".line")?.textContent).toContain("zip(input.tail)");
    expect(root.querySelectorAll(".comment.truncated")).toHaveLength(1);
  });

  it("highlights the error step and dims what follows", () => {
    const root = renderCandidate(ERROR_VIEW);
    const lines = [...root.querySelectorAll(".line")];
    expect(lines[2]?.classList.contains("error-step")).toBe(true);
    expect(lines[3]?.classList.contains("dimmed")).toBe(true);
    expect(lines[1]?.classList.contains("dimmed")).toBe(false);
  });

  it("marks the selected span of token lines", () => {
    const root = renderCandidate(Q3_VIEW, { start: 1, end: 2 });
    const selected = [...root.querySelectorAll(".line.selected")];
    expect(selected.map((l) => (l as HTMLElement).dataset.tokenIndex)).toEqual(["1", "2"]);
    expect(root.querySelector(".line.kind-input")?.classList.contains("selected")).toBe(false);
  });

  it("shows an error banner instead of a listing on malformed payloads", () => {
    const root = renderCandidate(makeView({ tokens: null }));
    expect(root.querySelector(".listing")).toBeNull();
    expect(root.querySelector(".error-banner")?.textContent).toMatch(/cannot display candidate/);
  });

  it("renders the same view to identical markup every time", () => {
    const once = renderCandidate(Q3_VIEW).outerHTML;
    const again = renderCandidate(structuredClone(Q3_VIEW)).outerHTML;
    expect(again).toBe(once);
  });
});
