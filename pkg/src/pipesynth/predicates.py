"""The feedback alphabet: examples plus the three syntactic predicates.

Remove forbids a contiguous token subsequence, Retain requires at least one
contiguous occurrence, Affix fixes the program's first tokens (an empty
affix constrains nothing), and Example requires evaluate(p, input) to equal
the expected output exactly. Consistency checking flags only contradictions
decidable without search; a Consistent set can still have an empty space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .descriptors import Vocabulary
from .interpreter import evaluate
from .ops import DEFAULT_LIMITS, EvalLimits
from .programs import Program
from .render import value_from_wire, value_to_wire
from .values import ErrorV, Value, type_check


@dataclass(frozen=True)
class Example:
    """Requires the program to map input to exactly output."""

    input: Value
    output: Value


@dataclass(frozen=True)
class Remove:
    """Forbids seq from occurring contiguously anywhere in the program."""

    seq: tuple[str, ...]


@dataclass(frozen=True)
class Retain:
    """Requires at least one contiguous occurrence of seq."""

    seq: tuple[str, ...]


@dataclass(frozen=True)
class Affix:
    """Pins the first len(prefix) tokens of the program."""

    prefix: tuple[str, ...]


Predicate = Union[Example, Remove, Retain, Affix]


class PredicateError(ValueError):
    """A predicate that fails validation against its vocabulary."""


def validate_predicate(q: Predicate, v: Vocabulary) -> None:
    match q:
        case Example(input, output):
            if isinstance(input, ErrorV) or isinstance(output, ErrorV):
                raise PredicateError("example values must not be errors")
            if not type_check(input, v.input_type):
                raise PredicateError("example input does not match the vocabulary input type")
        case Remove(seq) | Retain(seq):
            if not seq:
                raise PredicateError("token sequence must be nonempty")
            for tok in seq:
                if tok not in v:
                    raise PredicateError(f"unknown token {tok!r}")
        case Affix(prefix):
            for tok in prefix:
                if tok not in v:
                    raise PredicateError(f"unknown token {tok!r}")
        case _:
            raise PredicateError(f"not a predicate: {q!r}")


def contains_contiguous(tokens: tuple[str, ...], seq: tuple[str, ...]) -> bool:
    n = len(seq)
    if n == 0:
        return True
    return any(tokens[i: i + n] == seq for i in range(len(tokens) - n + 1))


def satisfies(
    p: Program,
    q: Predicate,
    v: Vocabulary,
    lim: EvalLimits = DEFAULT_LIMITS,
) -> bool:
    """Reference satisfaction semantics; pure given fixed limits."""
    match q:
        case Remove(seq):
            return not contains_contiguous(p.tokens, seq)
        case Retain(seq):
            return contains_contiguous(p.tokens, seq)
        case Affix(prefix):
            return p.tokens[: len(prefix)] == prefix
        case Example(input, output):
            return evaluate(p, input, v, lim) == output
    raise PredicateError(f"not a predicate: {q!r}")


@dataclass(frozen=True)
class Consistent:
    pass


@dataclass(frozen=True)
class Conflict:
    """Two predicates no program can satisfy together."""

    description: str
    first: Predicate
    second: Predicate


def check_consistency(preds: list[Predicate]) -> Consistent | Conflict:
    """Flag contradictions decidable without search.

    Covered: Retain(s) against Remove of any contiguous piece of s; Affix
    against Remove of a piece of the pinned prefix; two Affixes where
    neither prefix extends the other; one input with two outputs.
    """
    uniq: list[Predicate] = []
    for q in preds:
        if q not in uniq:
            uniq.append(q)
    for i, a in enumerate(uniq):
        for b in uniq[i + 1:]:
            c = _pair_conflict(a, b)
            if c is not None:
                return Conflict(c, a, b)
    return Consistent()


def _pair_conflict(a: Predicate, b: Predicate) -> str | None:
    # Normalize so the Remove (or second Affix/Example) sits in b.
    if isinstance(b, Retain) and isinstance(a, Remove):
        a, b = b, a
    if isinstance(b, Affix) and isinstance(a, Remove):
        a, b = b, a
    match (a, b):
        case (Retain(s), Remove(r)) if contains_contiguous(s, r):
            return "a retained sequence contains a removed sequence"
        case (Affix(pre), Remove(r)) if contains_contiguous(pre, r):
            return "the pinned prefix contains a removed sequence"
        case (Affix(x), Affix(y)):
            k = min(len(x), len(y))
            if x[:k] != y[:k]:
                return "affixes disagree on the shared prefix"
        case (Example(i1, o1), Example(i2, o2)):
            if i1 == i2 and o1 != o2:
                return "one input is given two different outputs"
    return None


# --- wire format -------------------------------------------------------------
#
# Tagged records used in session logs, scripts, and the HTTP API. Values
# travel as literal text in the display grammar.


def predicate_to_wire(q: Predicate) -> dict:
    match q:
        case Example(input, output):
            return {
                "kind": "example",
                "input": value_to_wire(input),
                "output": value_to_wire(output),
            }
        case Remove(seq):
            return {"kind": "remove", "tokens": list(seq)}
        case Retain(seq):
            return {"kind": "retain", "tokens": list(seq)}
        case Affix(prefix):
            return {"kind": "affix", "tokens": list(prefix)}
    raise PredicateError(f"not a predicate: {q!r}")


def predicate_from_wire(d: dict, v: Vocabulary) -> Predicate:
    try:
        kind = d["kind"]
    except (TypeError, KeyError):
        raise PredicateError(f"malformed predicate record {d!r}") from None
    match kind:
        case "example":
            try:
                q: Predicate = Example(
                    value_from_wire(d["input"], v.input_type),
                    value_from_wire(d["output"]),
                )
            except (KeyError, ValueError) as e:
                raise PredicateError(f"bad example record: {e}") from None
        case "remove":
            q = Remove(tuple(d.get("tokens", ())))
        case "retain":
            q = Retain(tuple(d.get("tokens", ())))
        case "affix":
            q = Affix(tuple(d.get("tokens", ())))
        case _:
            raise PredicateError(f"unknown predicate kind {kind!r}")
    validate_predicate(q, v)
    return q
