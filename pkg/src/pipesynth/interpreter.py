"""Program evaluation: final values, error absorption, per-prefix traces.

Evaluation is staged: the static receiver-pattern fold rejects ill-typed
prefixes with a TypeError value, then letters apply dynamically under
step, cell, and wall-clock budgets. Whatever budget trips, the result is
a Timeout error value; builtin failures (head of empty, division by zero)
are RuntimeError values. An error absorbs the rest of the pipeline.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .descriptors import MethodDescriptor, Vocabulary
from .ops import BUILTINS, DEFAULT_LIMITS, LAMBDAS, EvalContext, EvalLimits, Fault, LambdaFn
from .programs import Program
from .render import render_value
from .values import ErrorV, Value, count_cells, render_type, type_check

__all__ = [
    "DebugTrace",
    "TraceStep",
    "EvalLimits",
    "DEFAULT_LIMITS",
    "apply_letter",
    "evaluate",
    "trace",
    "render_value",
]


@dataclass(frozen=True)
class TraceStep:
    """One debug line: the value of a single pipeline prefix."""

    prefix_len: int
    rendered: str
    truncated: bool
    value: Value


@dataclass(frozen=True)
class DebugTrace:
    """Per-prefix values of a program on one input.

    Holds length(p)+1 steps with prefix_len counting up from 0, except
    that an error step ends the trace early.
    """

    steps: tuple[TraceStep, ...]

    @property
    def final(self) -> Value:
        return self.steps[-1].value


def resolve_lambda(letter: MethodDescriptor, v: Vocabulary) -> LambdaFn | None:
    if letter.lambda_id is None:
        return None
    return LAMBDAS[v.lambda_catalog[letter.lambda_id]]


def apply_letter(
    letter: MethodDescriptor, value: Value, ctx: EvalContext, v: Vocabulary
) -> Value:
    """Apply one letter dynamically. Errors pass through and faults become errors."""
    if isinstance(value, ErrorV):
        return value
    builtin = BUILTINS[letter.builtin_op]
    lam = resolve_lambda(letter, v)
    try:
        result = builtin.fn(ctx, value, letter.bound_args, lam)
        if count_cells(result) > ctx.limits.max_value_cells:
            return ErrorV("Timeout", "value size budget exceeded")
        return result
    except Fault as f:
        return f.to_error()


def _start_context(input: Value, lim: EvalLimits) -> EvalContext:
    return EvalContext(
        original_input=input, limits=lim, deadline=time.monotonic() + lim.timeout
    )


def evaluate(
    p: Program, input: Value, v: Vocabulary, lim: EvalLimits = DEFAULT_LIMITS
) -> Value:
    """Value of the full pipeline on one input, or the absorbed error."""
    if not type_check(input, v.input_type):
        return ErrorV("TypeError", "input does not match the vocabulary input type")
    ctx = _start_context(input, lim)
    cur_type = v.input_type
    value: Value = input
    for tok in p.tokens:
        letter = v[tok]
        nxt = letter.result_type(cur_type)
        if nxt is None:
            return ErrorV(
                "TypeError", f"{letter.token_id} does not apply to {render_type(cur_type)}"
            )
        cur_type = nxt
        value = apply_letter(letter, value, ctx, v)
        if isinstance(value, ErrorV):
            return value
    return value


def trace(
    p: Program,
    input: Value,
    v: Vocabulary,
    lim: EvalLimits = DEFAULT_LIMITS,
    render_width: int = 80,
) -> DebugTrace:
    """Per-prefix values in one shared evaluation pass.

    Each letter is applied once; step k is the length-k prefix's value.
    The first error step, if any, is the last step.
    """
    if not type_check(input, v.input_type):
        err = ErrorV("TypeError", "input does not match the vocabulary input type")
        r = render_value(err, render_width)
        return DebugTrace((TraceStep(0, r.text, r.truncated, err),))
    ctx = _start_context(input, lim)
    cur_type = v.input_type
    value: Value = input
    steps = []

    def push(k: int, val: Value) -> None:
        r = render_value(val, render_width)
        steps.append(TraceStep(k, r.text, r.truncated, val))

    push(0, value)
    for k, tok in enumerate(p.tokens, start=1):
        letter = v[tok]
        nxt = letter.result_type(cur_type)
        if nxt is None:
            value = ErrorV(
                "TypeError", f"{letter.token_id} does not apply to {render_type(cur_type)}"
            )
        else:
            cur_type = nxt
            value = apply_letter(letter, value, ctx, v)
        push(k, value)
        if isinstance(value, ErrorV):
            break
    return DebugTrace(tuple(steps))
