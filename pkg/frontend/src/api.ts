// Typed client for the synthesis service. Payload shapes mirror the
// service JSON field for field; nothing here reaches into the core.

// ---------------------------
// Wire types
// ---------------------------

export type TaskSummary = {
  task_id: string;
  name: string;
  description: string;
  letters: number;
  initial_examples: number;
  target_length: number | null;
  max_length: number;
  study_task: boolean;
};

// Errors travel as tagged records, everything else as literal text.
export type WireValue = string | { error: string; message: string };

export type TokenSpan = {
  index: number;
  token_id: string;
  display: string;
};

export type TraceStep = {
  prefix_len: number;
  rendered: string;
  truncated: boolean;
};

// One block per example; steps stop at the first error, if any.
export type ExampleTrace = {
  input: WireValue;
  expected_output: WireValue;
  steps: TraceStep[];
};

export type SpaceCounts = {
  total_wellformed: number;
  matching_examples: number;
  matching_all: number;
};

export type SessionStatus = "active" | "exhausted" | "accepted" | "abandoned";

export type SessionView = {
  session_id: string;
  task_id: string;
  status: SessionStatus;
  iteration_index: number;
  program_text: string | null;
  tokens: TokenSpan[] | null;
  traces: ExampleTrace[] | null;
  space_counts: SpaceCounts | null;
  accepted_program: string | null;
  allow_reject: boolean;
};

// Example values are literal text in the display grammar; the server
// parses and validates them, the client never does.
export type WirePredicate =
  | { kind: "remove" | "retain" | "affix"; tokens: string[] }
  | { kind: "example"; input: string; output: string };

export type CreateSessionOptions = {
  salt?: string;
  max_length?: number;
  oe?: boolean;
  allow_reject?: boolean;
};

// ---------------------------
// Client
// ---------------------------

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function errorDetail(res: Response): Promise<string> {
  const text = await res.text();
  try {
    const body: unknown = JSON.parse(text);
    if (body && typeof body === "object" && "detail" in body) {
      const d = (body as { detail: unknown }).detail;
      if (typeof d === "string") return d;
      return JSON.stringify(d);
    }
  } catch {
    // not JSON; fall through to the raw text
  }
  return text || res.statusText;
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    if (!res.ok) {
      throw new ApiError(res.status, await errorDetail(res));
    }
    return (await res.json()) as T;
  }

  listTasks(): Promise<TaskSummary[]> {
    return this.request("GET", "/tasks");
  }

  createSession(taskId: string, opts: CreateSessionOptions = {}): Promise<SessionView> {
    return this.request("POST", "/sessions", { task_id: taskId, ...opts });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  submitFeedback(
    sessionId: string,
    predicates: WirePredicate[],
    idempotencyKey?: string,
  ): Promise<SessionView> {
    const body: { predicates: WirePredicate[]; idempotency_key?: string } = { predicates };
    if (idempotencyKey !== undefined) body.idempotency_key = idempotencyKey;
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/feedback`, body);
  }

  accept(sessionId: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/accept`);
  }

  restart(sessionId: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/restart`);
  }

  abandon(sessionId: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/abandon`);
  }

  logUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/log`;
  }

  async fetchLog(sessionId: string): Promise<string> {
    const res = await this.fetchImpl(this.logUrl(sessionId), { method: "GET" });
    if (!res.ok) throw new ApiError(res.status, await errorDetail(res));
    return res.text();
  }
}

// ---------------------------
// Concurrency guard
// ---------------------------

// One request in flight per session. The screen checks `busy` to disable
// controls and refuses to start a second call while one is pending.
export class RequestGate {
  private pending = false;

  get busy(): boolean {
    return this.pending;
  }

  async run<T>(fn: () => Promise<T>): Promise<T> {
    if (this.pending) {
      throw new Error("a request is already in flight for this session");
    }
    this.pending = true;
    try {
      return await fn();
    } finally {
      this.pending = false;
    }
  }
}
