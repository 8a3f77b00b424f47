import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import type { FetchLike, SessionView } from "../src/api";
import { mountApp, SessionScreen } from "../src/app";
import type { Nav } from "../src/app";
import { makeView, MockService, scriptedViews } from "./mockServer";

let root: HTMLElement;

beforeEach(() => {
  root = document.createElement("div");
  document.body.replaceChildren(root);
});

const clientFor = (mock: MockService): ApiClient => new ApiClient("http://mock", mock.fetch);

async function mountSession(mock: MockService): Promise<SessionScreen> {
  const client = clientFor(mock);
  const view = await client.createSession("toy");
  return new SessionScreen(root, client, view);
}

const line = (index: number): HTMLElement => {
  const el = root.querySelector<HTMLElement>(`.line[data-token-index="${index}"]`);
  if (el === null) throw new Error(`no line for token ${index}`);
  return el;
};

const click = (el: HTMLElement, shiftKey = false): void => {
  el.dispatchEvent(new MouseEvent("click", { bubbles: true, shiftKey }));
};

const button = (selector: string): HTMLButtonElement => {
  const el = root.querySelector<HTMLButtonElement>(selector);
  if (el === null) throw new Error(`no element for ${selector}`);
  return el;
};

describe("span feedback", () => {
  it("posts exactly the token_ids of the highlighted lines", async () => {
    const mock = new MockService();
    const screen = await mountSession(mock);

    click(line(0));
    click(line(1), true);
    expect([...root.querySelectorAll(".line.selected")]).toHaveLength(2);

    button(".span-action-remove").click();
    await screen.whenIdle();

    const bodies = mock.feedbackBodies();
    expect(bodies).toHaveLength(1);
    expect(bodies[0]?.predicates).toEqual([
      { kind: "remove", tokens: ["takeRight(2)", "sorted"] },
    ]);
    expect(typeof bodies[0]?.idempotency_key).toBe("string");
    expect(bodies[0]?.idempotency_key?.length).toBeGreaterThan(0);

    // the next candidate is on screen and the stale selection is gone
    expect(screen.view.iteration_index).toBe(1);
    const codes = [...root.querySelectorAll(".line .code")].map((el) =>
      el.textContent?.trimEnd(),
    );
    expect(codes).toEqual(["input", ".sorted", ".take(2)"]);
    expect(root.querySelector(".line.selected")).toBeNull();
  });

  it("only offers affix for spans anchored on the first token", async () => {
    const mock = new MockService();
    await mountSession(mock);

    click(line(1));
    expect(root.querySelector(".span-action-remove")).not.toBeNull();
    expect(root.querySelector(".span-action-retain")).not.toBeNull();
    expect(root.querySelector(".span-action-affix")).toBeNull();

    click(line(0));
    expect(root.querySelector(".span-action-affix")).not.toBeNull();
  });

  it("keeps the offending selection and shows the conflict inline on 409", async () => {
    const mock = new MockService();
    mock.conflictOn = () => "remove of (sorted) contradicts an earlier retain";
    const screen = await mountSession(mock);

    click(line(1));
    button(".span-action-remove").click();
    await screen.whenIdle();

    expect(root.querySelector(".selection-bar .conflict")?.textContent).toMatch(/contradicts/);
    expect(line(1).classList.contains("selected")).toBe(true);
    expect(screen.view.iteration_index).toBe(0);
    // the session is untouched and the controls are live again
    expect(button(".accept").disabled).toBe(false);
  });

  it("clears a stale conflict when the selection changes", async () => {
    const mock = new MockService();
    mock.conflictOn = () => "no";
    const screen = await mountSession(mock);

    click(line(0));
    button(".span-action-retain").click();
    await screen.whenIdle();
    expect(root.querySelector(".conflict")).not.toBeNull();

    click(line(1));
    expect(root.querySelector(".conflict")).toBeNull();
  });
});

describe("example feedback", () => {
  const typeInto = (selector: string, text: string): void => {
    const field = root.querySelector<HTMLInputElement>(selector);
    if (field === null) throw new Error(`no field ${selector}`);
    field.value = text;
    field.dispatchEvent(new Event("input", { bubbles: true }));
  };

  it("sends the literals verbatim for the server to validate", async () => {
    const mock = new MockService();
    const screen = await mountSession(mock);

    typeInto(".example-input", '"cababc"');
    typeInto(".example-output", '"ab"');
    button(".add-example").click();
    await screen.whenIdle();

    expect(mock.feedbackBodies()[0]?.predicates).toEqual([
      { kind: "example", input: '"cababc"', output: '"ab"' },
    ]);
    expect(screen.view.iteration_index).toBe(1);
    expect(root.querySelector<HTMLInputElement>(".example-input")?.value).toBe("");
  });

  it("surfaces a rejected example next to the form and keeps the draft", async () => {
    const mock = new MockService();
    mock.conflictOn = () => 'bad example record: unterminated string at \'"ab\'';
    const screen = await mountSession(mock);

    typeInto(".example-input", '"cababc"');
    typeInto(".example-output", '"ab');
    button(".add-example").click();
    await screen.whenIdle();

    expect(root.querySelector(".example-form .conflict")?.textContent).toMatch(/unterminated/);
    expect(root.querySelector<HTMLInputElement>(".example-output")?.value).toBe('"ab');
    expect(screen.view.iteration_index).toBe(0);
  });

  it("requires both literals before calling the server", async () => {
    const mock = new MockService();
    const screen = await mountSession(mock);

    typeInto(".example-input", '"cababc"');
    button(".add-example").click();
    await screen.whenIdle();

    expect(root.querySelector(".example-form .conflict")?.textContent).toMatch(/required/);
    expect(mock.feedbackBodies()).toHaveLength(0);
  });

  it("survives re-renders from selection clicks without losing typed text", async () => {
    const mock = new MockService();
    await mountSession(mock);

    typeInto(".example-input", '"half typed');
    click(line(0));
    expect(root.querySelector<HTMLInputElement>(".example-input")?.value).toBe('"half typed');
  });
});

describe("session controls", () => {
  it("accept shows the final program text", async () => {
    const mock = new MockService();
    const screen = await mountSession(mock);

    button(".accept").click();
    await screen.whenIdle();

    expect(screen.view.status).toBe("accepted");
    expect(root.querySelector(".final-program")?.textContent).toBe("input.takeRight(2).sorted");
    expect(root.querySelector(".listing")).toBeNull();
  });

  it("offers a bare reject only when the session allows it", async () => {
    const withReject = scriptedViews().map((v) => ({ ...v, allow_reject: true }));
    const mock = new MockService(withReject);
    const screen = await mountSession(mock);

    expect(root.querySelector(".reject")).not.toBeNull();
    button(".reject").click();
    await screen.whenIdle();
    expect(mock.feedbackBodies()[0]?.predicates).toEqual([]);

    const plain = new MockService();
    root.replaceChildren();
    await mountSession(plain);
    expect(root.querySelector(".reject")).toBeNull();
  });

  it("presents the restart or abandon choice when the space is exhausted", async () => {
    const exhausted = makeView({
      status: "exhausted",
      iteration_index: 1,
      program_text: null,
      tokens: null,
      traces: null,
      space_counts: { total_wellformed: 156, matching_examples: 31, matching_all: 0 },
    });
    const mock = new MockService([makeView(), exhausted]);
    const screen = await mountSession(mock);

    click(line(0));
    button(".span-action-remove").click();
    await screen.whenIdle();

    expect(screen.view.status).toBe("exhausted");
    const panel = root.querySelector(".exhausted-panel");
    expect(panel).not.toBeNull();
    expect(panel?.querySelector(".restart")).not.toBeNull();
    expect(panel?.querySelector(".abandon")).not.toBeNull();
    expect(root.querySelector(".listing")).toBeNull();

    button(".exhausted-choice .restart").click();
    await screen.whenIdle();
    expect(screen.view.status).toBe("active");
    expect(root.querySelector(".listing")).not.toBeNull();
  });

  it("links the session transcript", async () => {
    const mock = new MockService();
    await mountSession(mock);
    expect(root.querySelector(".log-link")?.getAttribute("href")).toBe(
      "http://mock/sessions/toy-00000000000000aa/log",
    );
  });
});

describe("single in-flight request", () => {
  it("disables every control while a call is pending and ignores repeats", async () => {
    const calls: string[] = [];
    let release!: (r: Response) => void;
    const fetchImpl: FetchLike = (url, init) => {
      calls.push(`${init?.method ?? "GET"} ${url}`);
      return new Promise<Response>((resolve) => (release = resolve));
    };
    const screen = new SessionScreen(root, new ApiClient("", fetchImpl), makeView());

    button(".accept").click();
    expect(root.classList.contains("busy")).toBe(true);
    const controls = [...root.querySelectorAll<HTMLButtonElement>("button")];
    expect(controls.length).toBeGreaterThan(0);
    expect(controls.every((b) => b.disabled)).toBe(true);
    expect(
      [...root.querySelectorAll<HTMLInputElement>("input")].every((f) => f.disabled),
    ).toBe(true);

    button(".accept").click();
    expect(calls).toHaveLength(1);

    const accepted: SessionView = {
      ...makeView(),
      status: "accepted",
      accepted_program: "input.takeRight(2).sorted",
      program_text: null,
      tokens: null,
      traces: null,
    };
    release(
      new Response(JSON.stringify(accepted), {
        status: 200,
        headers: { "content-type": "application/json" },
      }),
    );
    await screen.whenIdle();

    expect(calls).toHaveLength(1);
    expect(root.classList.contains("busy")).toBe(false);
    expect(screen.view.status).toBe("accepted");
  });
});

describe("mounting", () => {
  const navStub = (hash: string): { nav: Nav; hashes: string[] } => {
    const hashes: string[] = [];
    return {
      nav: {
        getHash: () => hash,
        setHash: (h) => {
          hashes.push(h);
        },
      },
      hashes,
    };
  };

  it("re-fetching a session renders the identical view", async () => {
    const mock = new MockService();
    const client = clientFor(mock);
    await client.createSession("toy");
    const { nav } = navStub("#/s/toy-00000000000000aa");

    const first = document.createElement("div");
    const second = document.createElement("div");
    await mountApp(first, client, nav);
    await mountApp(second, client, nav);

    expect(first.innerHTML.length).toBeGreaterThan(0);
    expect(second.innerHTML).toBe(first.innerHTML);
    const gets = mock.requests.filter(
      (r) => r.method === "GET" && r.path === "/sessions/toy-00000000000000aa",
    );
    expect(gets).toHaveLength(2);
  });

  it("shows the task list and starts a session from it", async () => {
    const mock = new MockService();
    const { nav, hashes } = navStub("");
    const screen = await mountApp(root, clientFor(mock), nav);
    expect(screen).toBeNull();

    const card = root.querySelector('.task-card[data-task-id="toy"]');
    expect(card).not.toBeNull();
    expect(card?.textContent).toContain("toy ordering task");

    button(".start-task").click();
    await vi.waitFor(() => {
      if (root.querySelector(".session-header") === null) throw new Error("not mounted yet");
    });

    const posts = mock.requests.filter((r) => r.method === "POST" && r.path === "/sessions");
    expect(posts).toHaveLength(1);
    expect(posts[0]?.body).toEqual({ task_id: "toy" });
    expect(hashes).toEqual(["#/s/toy-00000000000000aa"]);
    expect(root.querySelector(".listing")).not.toBeNull();
  });

  it("reports a failed session start without leaving the task list", async () => {
    const mock = new MockService();
    const failing: FetchLike = async (url, init) =>
      init?.method === "POST"
        ? new Response(JSON.stringify({ detail: "no program satisfies the seed examples" }), {
            status: 409,
            headers: { "content-type": "application/json" },
          })
        : mock.fetch(url, init);
    const { nav } = navStub("");
    await mountApp(root, new ApiClient("http://mock", failing), nav);

    button(".start-task").click();
    await vi.waitFor(() => {
      const banner = root.querySelector(".error-banner");
      if (banner === null || banner.textContent === "") throw new Error("no banner yet");
    });
    expect(root.querySelector(".error-banner")?.textContent).toMatch(/seed examples/);
    expect(root.querySelector(".task-list")).not.toBeNull();
    expect(button(".start-task").disabled).toBe(false);
  });
});
