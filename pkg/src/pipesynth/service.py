"""HTTP front of the interactive loop.

One process holds the live sessions; clients are stateless and get the
complete per-iteration view (program text, token spans, per-example
traces, space counts) in every response. Mutating calls on one session
are serialized through a per-session lock, so concurrent feedback from
two tabs cannot interleave; feedback accepts an idempotency key and
replays the stored response on retry.

Enumerated spaces can be cached on disk per (task, length, folding)
so that starting a session on a large task is a file load, not a build.
"""

from __future__ import annotations

import asyncio
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .descriptors import SchemaError, VocabularyError
from .enumerator import EnumTree, ResourceExceeded, build_tree, load_space, save_space
from .ops import DEFAULT_LIMITS, EvalLimits
from .predicates import PredicateError, predicate_from_wire
from .programs import render_program
from .session import (
    EmptySpace,
    InconsistentFeedback,
    SessionClosed,
    SessionConfig,
    SessionError,
    SessionState,
    abandon,
    accept,
    candidate_payload,
    log_lines,
    restart,
    start_session,
    submit_feedback,
)
from .tasks import TaskDefinition, list_task_ids, load_task_by_id


class CreateSessionRequest(BaseModel):
    task_id: str
    salt: str | int | None = None
    max_length: int | None = Field(default=None, ge=0, le=16)
    oe: bool = False
    allow_reject: bool = False


class FeedbackRequest(BaseModel):
    predicates: list[dict]
    idempotency_key: str | None = None


class _Live:
    __slots__ = ("state", "lock", "responses")

    def __init__(self, state: SessionState):
        self.state = state
        self.lock = asyncio.Lock()
        self.responses: dict[str, dict] = {}


def _parse_salt(salt: str | int | None) -> int | None:
    if salt is None or isinstance(salt, int):
        return salt
    try:
        return int(salt, 16)
    except ValueError:
        raise HTTPException(422, detail="salt must be an integer or hex string") from None


def _token_spans(state: SessionState, tokens: list[str]) -> list[dict]:
    v = state.task.vocabulary
    return [
        {"index": i, "token_id": tok, "display": v[tok].display_text}
        for i, tok in enumerate(tokens)
    ]


def session_view(state: SessionState) -> dict:
    """The complete client-facing snapshot of one session."""
    view: dict = {
        "session_id": state.session_id,
        "task_id": state.task.task_id,
        "status": state.status,
        "iteration_index": state.iteration,
        "program_text": None,
        "tokens": None,
        "traces": None,
        "space_counts": None,
        "accepted_program": None,
        "allow_reject": state.config.allow_reject,
    }
    if state.current_candidate is not None and state.status == "active":
        payload = candidate_payload(state)
        view["program_text"] = payload["program"]
        view["tokens"] = _token_spans(state, payload["tokens"])
        view["traces"] = payload["traces"]
        view["space_counts"] = payload["space"]
    elif state.last_stats is not None:
        s = state.last_stats
        view["space_counts"] = {
            "total_wellformed": s.total_wellformed,
            "matching_examples": s.matching_examples,
            "matching_all": s.matching_all,
        }
    if state.accepted_program is not None:
        view["accepted_program"] = render_program(
            state.accepted_program, state.task.vocabulary
        )
    return view


def create_app(
    tasks_dir: str | Path | None = None,
    cache_dir: str | Path | None = None,
    limits: EvalLimits = DEFAULT_LIMITS,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="pipesynth", version="0.1.0")
    sessions: dict[str, _Live] = {}
    task_cache: dict[str, TaskDefinition] = {}

    def get_task(task_id: str) -> TaskDefinition:
        if task_id not in task_cache:
            try:
                task_cache[task_id] = load_task_by_id(task_id, tasks_dir)
            except (KeyError, FileNotFoundError):
                raise HTTPException(404, detail=f"unknown task {task_id!r}") from None
            except (SchemaError, VocabularyError) as e:
                raise HTTPException(500, detail=f"task {task_id!r} is broken: {e}") from None
        return task_cache[task_id]

    def get_live(session_id: str) -> _Live:
        live = sessions.get(session_id)
        if live is None:
            raise HTTPException(404, detail=f"unknown session {session_id!r}")
        return live

    def make_tree_factory(task: TaskDefinition, config: SessionConfig):
        if cache_dir is None:
            return None
        max_length = config.max_length if config.max_length is not None else task.max_length
        path = Path(cache_dir) / f"{task.task_id}-len{max_length}-oe{int(config.oe)}.space.jsonl"

        def factory() -> EnumTree:
            if path.exists():
                return load_space(path, task.vocabulary)
            tree = build_tree(
                task.vocabulary,
                max_length,
                config.oe,
                [i for i, _ in task.initial_examples],
                config.limits,
            )
            path.parent.mkdir(parents=True, exist_ok=True)
            save_space(tree, path)
            return tree

        return factory

    @app.get("/tasks")
    async def tasks_index() -> list[dict]:
        out = []
        for task_id in list_task_ids(tasks_dir):
            t = get_task(task_id)
            out.append(
                {
                    "task_id": t.task_id,
                    "name": t.name,
                    "description": t.description,
                    "letters": len(t.vocabulary.letters),
                    "initial_examples": len(t.initial_examples),
                    "target_length": len(t.target) if t.target is not None else None,
                    "max_length": t.max_length,
                    "study_task": t.study_task,
                }
            )
        return out

    @app.post("/sessions", status_code=201)
    async def create_session(req: CreateSessionRequest) -> dict:
        task = get_task(req.task_id)
        config = SessionConfig(
            salt=_parse_salt(req.salt),
            max_length=req.max_length,
            oe=req.oe,
            allow_reject=req.allow_reject,
            limits=limits,
        )
        try:
            state = start_session(task, config, make_tree_factory(task, config))
        except EmptySpace as e:
            raise HTTPException(409, detail=str(e)) from None
        except ResourceExceeded as e:
            raise HTTPException(507, detail=str(e)) from None
        sessions[state.session_id] = _Live(state)
        return session_view(state)

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str) -> dict:
        live = get_live(session_id)
        async with live.lock:
            return session_view(live.state)

    @app.post("/sessions/{session_id}/feedback")
    async def post_feedback(session_id: str, req: FeedbackRequest) -> dict:
        live = get_live(session_id)
        async with live.lock:
            if req.idempotency_key is not None and req.idempotency_key in live.responses:
                return live.responses[req.idempotency_key]
            try:
                preds = [
                    predicate_from_wire(d, live.state.task.vocabulary)
                    for d in req.predicates
                ]
            except (PredicateError, KeyError, ValueError) as e:
                raise HTTPException(422, detail=f"bad predicate: {e}") from None
            try:
                submit_feedback(live.state, preds)
            except InconsistentFeedback as e:
                raise HTTPException(409, detail=str(e)) from None
            except SessionClosed as e:
                raise HTTPException(410, detail=str(e)) from None
            except SessionError as e:
                raise HTTPException(409, detail=str(e)) from None
            view = session_view(live.state)
            if req.idempotency_key is not None:
                live.responses[req.idempotency_key] = view
            return view

    def _finalize(op, session_id: str) -> dict:
        live = get_live(session_id)
        try:
            op(live.state)
        except SessionClosed as e:
            raise HTTPException(410, detail=str(e)) from None
        return session_view(live.state)

    @app.post("/sessions/{session_id}/accept")
    async def post_accept(session_id: str) -> dict:
        live = get_live(session_id)
        async with live.lock:
            return _finalize(accept, session_id)

    @app.post("/sessions/{session_id}/restart")
    async def post_restart(session_id: str) -> dict:
        live = get_live(session_id)
        async with live.lock:
            return _finalize(restart, session_id)

    @app.post("/sessions/{session_id}/abandon")
    async def post_abandon(session_id: str) -> dict:
        live = get_live(session_id)
        async with live.lock:
            return _finalize(abandon, session_id)

    @app.get("/sessions/{session_id}/log")
    async def get_log(session_id: str) -> PlainTextResponse:
        live = get_live(session_id)
        async with live.lock:
            body = "\n".join(log_lines(live.state))
        return PlainTextResponse(body + "\n" if body else "", media_type="application/jsonl")

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
