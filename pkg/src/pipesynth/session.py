"""Interactive sessions: candidate issue, feedback intake, logs, replay.

One session walks the loop: enumerate the space once, filter by the
accumulated predicates, pick a candidate by salted hash, show it with a
per-example debug trace, ingest feedback, repeat. Every event is logged
as one JSON record; the transcript is the same stream minus timestamps,
so identical task+salt+script runs produce byte-identical transcripts.

Candidate choice hashes the rendered program so the stream does not creep
lexicographically; the salt decorrelates reruns. A shown candidate is
never shown again unless it becomes the sole survivor. When every
satisfying program has been shown (or none is left) the session is
exhausted and the user may restart, which resets the predicates to the
seed examples but keeps history, log, and salt.
"""

from __future__ import annotations

import json
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field

from .enumerator import (
    DEFAULT_NODE_CAP,
    EnumTree,
    SpaceStats,
    add_example,
    build_tree,
    count_space,
    iterate_candidates,
    prune_with,
)
from .interpreter import trace
from .ops import DEFAULT_LIMITS, EvalLimits
from .predicates import (
    Affix,
    Conflict,
    Example,
    Predicate,
    Remove,
    check_consistency,
    predicate_from_wire,
    predicate_to_wire,
    validate_predicate,
)
from .programs import Program, parse_program, render_program
from .render import value_to_wire
from .tasks import TaskDefinition

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_M64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & _M64
    return h


class SessionError(Exception):
    pass


class EmptySpace(SessionError):
    """No program satisfies the seed examples."""


class SessionClosed(SessionError):
    """The session is already finalized for this operation."""


class InconsistentFeedback(SessionError):
    """Feedback that contradicts the accumulated predicates."""

    def __init__(self, conflict: Conflict):
        super().__init__(conflict.description)
        self.conflict = conflict


@dataclass(frozen=True)
class SessionConfig:
    salt: int | None = None
    max_length: int | None = None
    oe: bool = False
    allow_reject: bool = False
    limits: EvalLimits = DEFAULT_LIMITS
    node_cap: int = DEFAULT_NODE_CAP
    trace_width: int = 80


@dataclass
class HistoryEntry:
    candidate: Program
    shown_at: float
    feedback: list[Predicate] | str | None = None
    answered_at: float | None = None


@dataclass
class SessionState:
    task: TaskDefinition
    config: SessionConfig
    salt: int
    session_id: str
    tree: EnumTree
    predicates: list[Predicate]
    status: str = "active"
    iteration: int = 0
    current_candidate: Program | None = None
    accepted_program: Program | None = None
    shown: set[Program] = field(default_factory=set)
    history: list[HistoryEntry] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)
    last_stats: SpaceStats | None = None
    tree_factory: Callable[[], EnumTree] | None = None


def select_candidate(programs: list[Program], salt: int, task: TaskDefinition) -> Program:
    """Argmin of salted 64-bit FNV-1a over the rendered program text.

    Ties break toward shorter programs, then lexicographic token order.
    """
    if not programs:
        raise ValueError("select_candidate needs a nonempty set")
    salt_bytes = salt.to_bytes(8, "big")

    def key(p: Program):
        text = render_program(p, task.vocabulary)
        return (fnv1a_64(text.encode("utf-8") + salt_bytes), len(p.tokens), p.tokens)

    return min(programs, key=key)


def _emit(st: SessionState, kind: str, payload: dict) -> None:
    st.log.append(
        {"ts": time.time(), "session_id": st.session_id, "event_kind": kind, "payload": payload}
    )


def record_to_line(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def transcript_lines(st: SessionState) -> list[str]:
    """The log stream minus timestamps; byte-stable across identical runs."""
    out = []
    for rec in st.log:
        bare = {k: v for k, v in rec.items() if k != "ts"}
        out.append(record_to_line(bare))
    return out


def log_lines(st: SessionState) -> list[str]:
    return [record_to_line(rec) for rec in st.log]


def candidate_payload(st: SessionState) -> dict:
    """The full per-iteration view: program, traces per example, counts."""
    assert st.current_candidate is not None
    p = st.current_candidate
    v = st.task.vocabulary
    traces = []
    for q in st.predicates:
        if not isinstance(q, Example):
            continue
        t = trace(p, q.input, v, st.config.limits, render_width=st.config.trace_width)
        traces.append(
            {
                "input": value_to_wire(q.input),
                "expected_output": value_to_wire(q.output),
                "steps": [
                    {"prefix_len": s.prefix_len, "rendered": s.rendered, "truncated": s.truncated}
                    for s in t.steps
                ],
            }
        )
    stats = st.last_stats
    assert stats is not None
    return {
        "iteration": st.iteration,
        "program": render_program(p, v),
        "tokens": list(p.tokens),
        "traces": traces,
        "space": {
            "total_wellformed": stats.total_wellformed,
            "matching_examples": stats.matching_examples,
            "matching_all": stats.matching_all,
        },
    }


def _advance(st: SessionState, at_start: bool) -> None:
    """Pick and publish the next candidate, or mark the session exhausted."""
    satisfying = list(iterate_candidates(st.tree, st.predicates))
    st.last_stats = count_space(st.tree, st.predicates)
    if not satisfying and at_start:
        raise EmptySpace("no program satisfies the seed examples")
    fresh = [p for p in satisfying if p not in st.shown]
    if fresh:
        pick = select_candidate(fresh, st.salt, st.task)
    elif len(satisfying) == 1:
        pick = satisfying[0]
    else:
        st.status = "exhausted"
        st.current_candidate = None
        _emit(st, "exhausted", {"iteration": st.iteration})
        return
    st.current_candidate = pick
    st.shown.add(pick)
    st.history.append(HistoryEntry(candidate=pick, shown_at=time.time()))
    _emit(st, "candidate", candidate_payload(st))


def start_session(
    task: TaskDefinition,
    config: SessionConfig | None = None,
    tree_factory: Callable[[], EnumTree] | None = None,
) -> SessionState:
    config = config or SessionConfig()
    salt = config.salt if config.salt is not None else random.SystemRandom().getrandbits(64)
    max_length = config.max_length if config.max_length is not None else task.max_length
    if tree_factory is None:
        def tree_factory() -> EnumTree:
            return build_tree(
                task.vocabulary,
                max_length,
                config.oe,
                [i for i, _ in task.initial_examples],
                config.limits,
                config.node_cap,
            )
    st = SessionState(
        task=task,
        config=config,
        salt=salt,
        session_id=f"{task.task_id}-{salt:016x}",
        tree=tree_factory(),
        predicates=[Example(i, o) for i, o in task.initial_examples],
        tree_factory=tree_factory,
    )
    _emit(
        st,
        "session_start",
        {
            "task_id": task.task_id,
            "salt": f"{salt:016x}",
            "max_length": max_length,
            "oe": config.oe,
            "allow_reject": config.allow_reject,
        },
    )
    _emit(
        st,
        "examples_seeded",
        {"examples": [predicate_to_wire(q) for q in st.predicates]},
    )
    _advance(st, at_start=True)
    return st


def _close_history(st: SessionState, feedback: list[Predicate] | str) -> None:
    if st.history and st.history[-1].feedback is None:
        st.history[-1].feedback = feedback
        st.history[-1].answered_at = time.time()


def submit_feedback(st: SessionState, fb: list[Predicate]) -> dict | None:
    """Accumulate predicates and move to the next candidate.

    Returns the new candidate payload, or None when the space is exhausted.
    """
    if st.status != "active":
        raise SessionClosed(f"session is {st.status}")
    if not fb:
        if not st.config.allow_reject:
            raise SessionError("empty feedback (bare reject) is not allowed")
        _close_history(st, "reject")
        _emit(st, "feedback", {"predicates": []})
        st.iteration += 1
        _advance(st, at_start=False)
        return candidate_payload(st) if st.status == "active" else None

    for q in fb:
        validate_predicate(q, st.task.vocabulary)
    verdict = check_consistency(st.predicates + fb)
    if isinstance(verdict, Conflict):
        raise InconsistentFeedback(verdict)

    _close_history(st, fb)
    _emit(st, "feedback", {"predicates": [predicate_to_wire(q) for q in fb]})
    for q in fb:
        if q in st.predicates:
            continue
        st.predicates.append(q)
        match q:
            case Example(input, _):
                add_example(st.tree, input)
            case Remove(_) | Affix(_):
                prune_with(st.tree, q)
            case _:
                pass
    st.iteration += 1
    _advance(st, at_start=False)
    return candidate_payload(st) if st.status == "active" else None


def accept(st: SessionState) -> SessionState:
    if st.status != "active" or st.current_candidate is None:
        raise SessionClosed(f"cannot accept a session that is {st.status}")
    st.status = "accepted"
    st.accepted_program = st.current_candidate
    _close_history(st, "accept")
    _emit(
        st,
        "accepted",
        {
            "program": render_program(st.current_candidate, st.task.vocabulary),
            "tokens": list(st.current_candidate.tokens),
            "iteration": st.iteration,
        },
    )
    return st


def restart(st: SessionState) -> SessionState:
    """Back to the seed examples; history, log, and salt are kept."""
    if st.status not in ("active", "exhausted"):
        raise SessionClosed(f"cannot restart a session that is {st.status}")
    _close_history(st, "restart")
    assert st.tree_factory is not None
    st.tree = st.tree_factory()
    st.predicates = [Example(i, o) for i, o in st.task.initial_examples]
    st.shown = set()
    st.iteration = 0
    st.status = "active"
    st.current_candidate = None
    _emit(st, "restarted", {})
    _advance(st, at_start=False)
    return st


def abandon(st: SessionState) -> SessionState:
    if st.status not in ("active", "exhausted"):
        raise SessionClosed(f"cannot abandon a session that is {st.status}")
    st.status = "abandoned"
    _close_history(st, "abandon")
    _emit(st, "abandoned", {})
    return st


# --- scripted sessions --------------------------------------------------------
#
# Scripts use the same record format as session logs: a script_header
# record, then feedback/restart/accept/abandon events. A transcript of a
# finished scripted run is itself a valid script.


@dataclass
class ScriptOutcome:
    state: SessionState
    incomplete: bool
    mismatch: bool
    expected: str | None


def parse_script(lines: list[str]) -> list[dict]:
    records = []
    for i, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise ValueError(f"script line {i + 1}: {e}") from None
    if not records or records[0].get("event_kind") != "script_header":
        raise ValueError("script must begin with a script_header record")
    return records


def run_script(
    task: TaskDefinition, records: list[dict], config: SessionConfig | None = None
) -> ScriptOutcome:
    """Drive a session from a parsed script; deterministic given the salt."""
    header = records[0].get("payload", {})
    if config is None:
        salt = header.get("salt")
        config = SessionConfig(
            salt=int(salt, 16) if isinstance(salt, str) else salt,
            max_length=header.get("max_length"),
            oe=header.get("oe", False),
            allow_reject=header.get("allow_reject", False),
        )
    st = start_session(task, config)
    expected = None
    mismatch = False
    incomplete = True
    for step, rec in enumerate(records[1:], start=2):
        kind = rec.get("event_kind")
        payload = rec.get("payload", {})
        if kind == "feedback":
            preds = [
                predicate_from_wire(d, task.vocabulary) for d in payload.get("predicates", [])
            ]
            try:
                submit_feedback(st, preds)
            except InconsistentFeedback as e:
                raise ValueError(f"script step {step} is inconsistent: {e}") from None
        elif kind == "restart":
            restart(st)
        elif kind == "abandon":
            abandon(st)
            incomplete = False
            break
        elif kind == "accept":
            expected = payload.get("expected_program")
            accept(st)
            incomplete = False
            if expected is not None:
                got = render_program(st.accepted_program, task.vocabulary)
                mismatch = got != expected
            break
        else:
            raise ValueError(f"script step {step}: unknown event kind {kind!r}")
    return ScriptOutcome(state=st, incomplete=incomplete, mismatch=mismatch, expected=expected)


def replay_log(task: TaskDefinition, lines: list[str]) -> tuple[bool, list[str], list[str]]:
    """Re-drive a recorded log; returns (ok, recorded transcript, new transcript)."""
    records = []
    for line in lines:
        line = line.strip()
        if line:
            records.append(json.loads(line))
    start = next((r for r in records if r.get("event_kind") == "session_start"), None)
    if start is None:
        raise ValueError("log has no session_start record")
    payload = start["payload"]
    config = SessionConfig(
        salt=int(payload["salt"], 16),
        max_length=payload.get("max_length"),
        oe=payload.get("oe", False),
        allow_reject=payload.get("allow_reject", False),
    )
    st = start_session(task, config)
    for rec in records:
        kind = rec.get("event_kind")
        if kind == "feedback":
            preds = [
                predicate_from_wire(d, task.vocabulary)
                for d in rec["payload"].get("predicates", [])
            ]
            submit_feedback(st, preds)
        elif kind == "restarted":
            restart(st)
        elif kind == "accepted":
            accept(st)
        elif kind == "abandoned":
            abandon(st)
    recorded = [
        record_to_line({k: v for k, v in rec.items() if k != "ts"}) for rec in records
    ]
    fresh = transcript_lines(st)
    return recorded == fresh, recorded, fresh


__all__ = [
    "SessionConfig",
    "SessionState",
    "HistoryEntry",
    "ScriptOutcome",
    "SessionError",
    "EmptySpace",
    "SessionClosed",
    "InconsistentFeedback",
    "fnv1a_64",
    "select_candidate",
    "start_session",
    "submit_feedback",
    "accept",
    "restart",
    "abandon",
    "candidate_payload",
    "transcript_lines",
    "log_lines",
    "record_to_line",
    "parse_script",
    "run_script",
    "replay_log",
    "parse_program",
]
