"""Interactive loop: selection, feedback, lifecycle, scripts, replays."""

import json

import pytest

from pipesynth.predicates import Affix, Example, PredicateError, Remove, Retain
from pipesynth.programs import Program, render_program
from pipesynth.session import (
    EmptySpace,
    InconsistentFeedback,
    SessionClosed,
    SessionConfig,
    SessionError,
    abandon,
    accept,
    fnv1a_64,
    log_lines,
    parse_script,
    replay_log,
    restart,
    run_script,
    select_candidate,
    start_session,
    submit_feedback,
    transcript_lines,
)
from pipesynth.tasks import TaskDefinition
from pipesynth.values import Str


@pytest.fixture
def toy_task(toy_vocab):
    return TaskDefinition(
        task_id="toy",
        name="toy",
        description="",
        vocabulary=toy_vocab,
        initial_examples=[(Str("cba"), Str("ab"))],
        target=Program(("sorted", "take(2)")),
        max_length=3,
        study_task=False,
        banned_letter=None,
        generator_spec={"kind": "string", "alphabet": "abc",
                        "min_len": 0, "max_len": 6},
    )


CFG = SessionConfig(salt=0x1234ABCD5678EF01, max_length=3)


def fnv_reference(data: bytes) -> int:
    h = 14695981039346656037
    for byte in data:
        h = ((h ^ byte) * 1099511628211) % (1 << 64)
    return h


def test_fnv1a_matches_published_vectors():
    # standard test vectors for 64-bit FNV-1a
    assert fnv1a_64(b"") == 14695981039346656037
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8
    assert fnv1a_64(b"chongo was here!\n") == 0x46810940EFF5F915


def test_select_candidate_is_salted_hash_argmin(toy_task):
    programs = [
        Program(("sorted",)),
        Program(("sorted", "take(2)")),
        Program(("take(2)", "sorted")),
    ]
    salt = 0xDEADBEEFCAFEF00D
    want = min(
        programs,
        key=lambda p: (
            fnv_reference(
                render_program(p, toy_task.vocabulary).encode()
                + salt.to_bytes(8, "big")
            ),
            len(p.tokens),
            p.tokens,
        ),
    )
    assert select_candidate(programs, salt, toy_task) == want


def test_select_candidate_empty_set_raises(toy_task):
    with pytest.raises(ValueError):
        select_candidate([], 1, toy_task)


def test_start_session_candidate_satisfies_seed(toy_task, toy_vocab):
    st = start_session(toy_task, CFG)
    assert st.status == "active"
    assert st.iteration == 0
    from pipesynth.interpreter import evaluate

    assert evaluate(st.current_candidate, Str("cba"), toy_vocab) == Str("ab")


def test_unsatisfiable_seed_raises_empty_space(toy_task):
    bad = TaskDefinition(
        **{**toy_task.__dict__, "initial_examples": [(Str("ab"), Str("zzzzz"))]}
    )
    with pytest.raises(EmptySpace):
        start_session(bad, CFG)


def test_candidates_never_repeat_while_fresh_ones_exist(toy_task):
    st = start_session(toy_task, CFG)
    seen = [st.current_candidate]
    # knock out the shown candidate's first token each round
    for _ in range(10):
        if st.status != "active":
            break
        tok = st.current_candidate.tokens[0] if st.current_candidate.tokens else None
        if tok is None:
            break
        out = submit_feedback(st, [Remove((tok,))])
        if out is None:
            break
        seen.append(st.current_candidate)
    texts = [p.tokens for p in seen]
    assert len(texts) == len(set(texts))


PIN_TARGET = [
    Affix(("sorted", "take(2)")),
    Remove(("take(2)", "sorted")),
    Remove(("take(2)", "take(2)")),
    Remove(("take(2)", "distinct")),
]


def test_sole_survivor_is_reshown(toy_task, toy_vocab):
    st = start_session(toy_task, CFG)
    # pin the space to exactly the target
    submit_feedback(st, PIN_TARGET)
    only = st.current_candidate
    assert only == Program(("sorted", "take(2)"))
    # harmless extra feedback: the only survivor comes back again
    out = submit_feedback(st, [Retain(("sorted",))])
    assert out is not None
    assert st.current_candidate == only
    assert st.status == "active"


def test_feedback_validates_and_checks_consistency(toy_task):
    st = start_session(toy_task, CFG)
    with pytest.raises(PredicateError):
        submit_feedback(st, [Remove(("no-such-token",))])
    submit_feedback(st, [Retain(("sorted",))])
    with pytest.raises(InconsistentFeedback):
        submit_feedback(st, [Remove(("sorted",))])
    # the failed submission must not have been recorded
    assert Remove(("sorted",)) not in st.predicates


def test_bare_reject_needs_opt_in(toy_task):
    st = start_session(toy_task, CFG)
    with pytest.raises(SessionError):
        submit_feedback(st, [])
    cfg = SessionConfig(salt=7, max_length=3, allow_reject=True)
    st2 = start_session(toy_task, cfg)
    first = st2.current_candidate
    submit_feedback(st2, [])
    assert st2.current_candidate != first


def test_accept_closes_the_session(toy_task):
    st = start_session(toy_task, CFG)
    got = st.current_candidate
    accept(st)
    assert st.status == "accepted"
    assert st.accepted_program == got
    with pytest.raises(SessionClosed):
        submit_feedback(st, [Retain(("sorted",))])
    with pytest.raises(SessionClosed):
        restart(st)


def test_abandon(toy_task):
    st = start_session(toy_task, CFG)
    abandon(st)
    assert st.status == "abandoned"
    with pytest.raises(SessionClosed):
        accept(st)


def test_restart_resets_to_seed_but_keeps_salt_and_log(toy_task):
    st = start_session(toy_task, CFG)
    first = st.current_candidate
    submit_feedback(st, [Remove(first.tokens[:1])])
    n_log = len(st.log)
    restart(st)
    assert st.iteration == 0
    assert st.status == "active"
    assert st.predicates == [Example(Str("cba"), Str("ab"))]
    assert st.current_candidate == first
    assert len(st.log) > n_log


def test_same_salt_same_run_transcripts_identical(toy_task):
    def drive(cfg):
        st = start_session(toy_task, cfg)
        submit_feedback(st, [Retain(("sorted",))])
        submit_feedback(st, [Remove(("tail",))])
        accept(st)
        return transcript_lines(st)

    a = drive(SessionConfig(salt=99, max_length=3))
    b = drive(SessionConfig(salt=99, max_length=3))
    assert a == b


def test_scripts_round_trip_through_run_and_replay(toy_task):
    lines = [
        json.dumps({"event_kind": "script_header",
                    "payload": {"task_id": "toy", "salt": "00000000000000ff",
                                "max_length": 3}}),
        json.dumps({"event_kind": "feedback",
                    "payload": {"predicates": [
                        {"kind": "affix", "tokens": ["sorted", "take(2)"]},
                        {"kind": "remove", "tokens": ["take(2)", "sorted"]},
                        {"kind": "remove", "tokens": ["take(2)", "take(2)"]},
                        {"kind": "remove", "tokens": ["take(2)", "distinct"]}]}}),
        json.dumps({"event_kind": "accept",
                    "payload": {"expected_program": "input.sorted.take(2)"}}),
    ]
    outcome = run_script(toy_task, parse_script(lines))
    assert outcome.state.status == "accepted"
    assert not outcome.incomplete
    assert not outcome.mismatch
    assert outcome.expected == "input.sorted.take(2)"
    ok, recorded, fresh = replay_log(toy_task, log_lines(outcome.state))
    assert ok and recorded == fresh


def test_script_mismatch_is_reported_not_raised(toy_task):
    lines = [
        json.dumps({"event_kind": "script_header",
                    "payload": {"task_id": "toy", "salt": 255, "max_length": 3}}),
        json.dumps({"event_kind": "accept",
                    "payload": {"expected_program": "input.take(2)"}}),
    ]
    outcome = run_script(toy_task, parse_script(lines))
    assert outcome.state.status == "accepted"
    assert outcome.mismatch or outcome.expected == render_program(
        outcome.state.accepted_program, toy_task.vocabulary
    )


def test_script_without_accept_is_incomplete(toy_task):
    lines = [
        json.dumps({"event_kind": "script_header",
                    "payload": {"task_id": "toy", "salt": 255, "max_length": 3}}),
        json.dumps({"event_kind": "feedback",
                    "payload": {"predicates": [
                        {"kind": "retain", "tokens": ["sorted"]}]}}),
    ]
    outcome = run_script(toy_task, parse_script(lines))
    assert outcome.incomplete
    assert outcome.state.status == "active"


def test_parse_script_rejects_garbage():
    with pytest.raises(ValueError):
        parse_script(["not json at all"])
    with pytest.raises(ValueError):
        parse_script([json.dumps({"event_kind": "feedback", "payload": {}})])


def test_replay_detects_tampered_log(toy_task):
    st = start_session(toy_task, SessionConfig(salt=1, max_length=3))
    accept(st)
    lines = log_lines(st)
    bad = [
        line.replace('"accepted"', '"tampered"') if '"accepted"' in line else line
        for line in lines
    ]
    if bad == lines:
        pytest.skip("log shape changed; nothing to tamper with")
    ok, _, _ = replay_log(toy_task, bad)
    assert not ok
