"""Builtin method catalog and cataloged lambdas.

Semantics mirror the Scala 2.12 collections library (with Java string
methods where Scala delegates): take/drop clamp, tail/head/last/min/max
throw on empty receivers, split discards trailing empty fields, sliding
yields one whole window when the receiver is shorter than the window,
grouped keeps the final partial group, integer arithmetic wraps at 64
bits, and integer division truncates toward zero.

Equality between values of different variants is false, never an error.
That is what makes nullipotent letters possible: `c != "\\n"` is true for
every Char c because a Char is never a String.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .scala_order import map_entries_in_order
from .values import (
    BoolV,
    CharV,
    ErrorV,
    IntV,
    ListV,
    MapV,
    PairV,
    Str,
    Value,
)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


def wrap64(n: int) -> int:
    """Wrap an unbounded int into signed 64-bit two's complement."""
    return ((n + (1 << 63)) & ((1 << 64) - 1)) - (1 << 63)


class Fault(Exception):
    """An evaluation failure; the interpreter converts it to ErrorV."""

    def __init__(self, kind: str, message: str = ""):
        assert kind in ErrorV.KINDS
        super().__init__(f"{kind}: {message}" if message else kind)
        self.kind = kind
        self.message = message

    def to_error(self) -> ErrorV:
        return ErrorV(self.kind, self.message)


@dataclass(frozen=True)
class EvalLimits:
    """Resource budgets for one program evaluation."""

    max_steps: int = 100_000
    max_value_cells: int = 1_000_000
    timeout: float = 1.0


DEFAULT_LIMITS = EvalLimits()


@dataclass
class EvalContext:
    """Mutable per-evaluation state: budgets and the original input.

    Letters written against the free variable `input` (zip with the input's
    tail, drop half the input's length) read original_input, not the current
    prefix value.
    """

    original_input: Value
    limits: EvalLimits = field(default_factory=lambda: DEFAULT_LIMITS)
    deadline: float | None = None
    steps: int = 0

    def charge(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.limits.max_steps:
            raise Fault("Timeout", "step budget exceeded")
        # Wall-clock checks are sampled; exact cadence is irrelevant.
        if self.deadline is not None and (self.steps & 0xFF) < n:
            if time.monotonic() > self.deadline:
                raise Fault("Timeout", "wall-clock budget exceeded")


LambdaFn = Callable[[EvalContext, Value], Value]


@dataclass(frozen=True)
class Builtin:
    """One catalog entry: bound-argument shape plus the implementation."""

    name: str
    fn: Callable[[EvalContext, Value, tuple, LambdaFn | None], Value]
    arg_kinds: tuple[str, ...] = ()
    needs_lambda: bool = False


# --- sequence plumbing ------------------------------------------------------
#
# Str and ListV share most bulk operations. A receiver is viewed as a list
# of element values plus a rebuild rule: filtering a Str yields a Str,
# mapping a Str yields a Str only while every result is still a Char.


def _elems(v: Value) -> list[Value]:
    match v:
        case Str(text):
            return [CharV(c) for c in text]
        case ListV(items):
            return list(items)
        case MapV():
            return [PairV(k, val) for k, val in map_entries_in_order(v)]
        case _:
            raise Fault("TypeError", "not a sequence")


def _rebuild(template: Value, items: list[Value]) -> Value:
    if isinstance(template, Str):
        return Str("".join(c.char for c in items))  # type: ignore[union-attr]
    return ListV(tuple(items))


def _length(v: Value) -> int:
    match v:
        case Str(text):
            return len(text)
        case ListV(items):
            return len(items)
        case MapV(entries):
            return len(entries)
        case _:
            raise Fault("TypeError", "has no length")


def _want_bool(v: Value) -> bool:
    if not isinstance(v, BoolV):
        raise Fault("TypeError", "predicate did not return a boolean")
    return v.value


def _want_pair(v: Value) -> PairV:
    if not isinstance(v, PairV):
        raise Fault("TypeError", "not a pair")
    return v


def scala_show(v: Value) -> str:
    """Scala's toString: strings and chars bare, standard collection forms."""
    match v:
        case Str(text):
            return text
        case CharV(char):
            return char
        case IntV(value):
            return str(value)
        case BoolV(value):
            return "true" if value else "false"
        case PairV(a, b):
            return f"({scala_show(a)},{scala_show(b)})"
        case ListV(items):
            return "List(" + ", ".join(scala_show(x) for x in items) + ")"
        case MapV():
            inner = ", ".join(
                f"{scala_show(k)} -> {scala_show(val)}" for k, val in map_entries_in_order(v)
            )
            return "Map(" + inner + ")"
        case ErrorV(kind, message):
            return f"{kind}: {message}" if message else kind
    raise Fault("TypeError", "unprintable value")


# --- ordering ---------------------------------------------------------------


def _sort_key(ctx: EvalContext, v: Value):
    """Recursive ordering key. Tag prefixes keep variants from colliding."""
    match v:
        case IntV(n):
            return ("i", n)
        case CharV(c):
            return ("c", c)
        case Str(s):
            return ("s", s)
        case BoolV(b):
            return ("b", b)
        case PairV(a, b):
            return ("p", _sort_key(ctx, a), _sort_key(ctx, b))
        case ListV(items):
            ctx.charge(len(items))
            return ("l", tuple(_sort_key(ctx, x) for x in items))
        case _:
            raise Fault("TypeError", "no ordering for this type")


# --- builtin implementations ------------------------------------------------


def _bi_take(ctx, recv, args, lam):
    n = args[0]
    ctx.charge(1)
    match recv:
        case Str(text):
            return Str(text[: max(0, n)])
        case ListV(items):
            return ListV(items[: max(0, n)])
    raise Fault("TypeError", "take needs a sequence")


def _bi_drop(ctx, recv, args, lam):
    n = args[0]
    ctx.charge(1)
    match recv:
        case Str(text):
            return Str(text[max(0, n):])
        case ListV(items):
            return ListV(items[max(0, n):])
    raise Fault("TypeError", "drop needs a sequence")


def _bi_take_right(ctx, recv, args, lam):
    n = max(0, args[0])
    ctx.charge(1)
    match recv:
        case Str(text):
            return Str(text[max(0, len(text) - n):] if n else "")
        case ListV(items):
            return ListV(items[max(0, len(items) - n):] if n else ())
    raise Fault("TypeError", "takeRight needs a sequence")


def _bi_drop_right(ctx, recv, args, lam):
    n = max(0, args[0])
    ctx.charge(1)
    match recv:
        case Str(text):
            return Str(text[: max(0, len(text) - n)] if n else text)
        case ListV(items):
            return ListV(items[: max(0, len(items) - n)] if n else items)
    raise Fault("TypeError", "dropRight needs a sequence")


def _bi_tail(ctx, recv, args, lam):
    ctx.charge(1)
    if _length(recv) == 0:
        raise Fault("RuntimeError", "tail of empty sequence")
    match recv:
        case Str(text):
            return Str(text[1:])
        case ListV(items):
            return ListV(items[1:])
    raise Fault("TypeError", "tail needs a sequence")


def _bi_head(ctx, recv, args, lam):
    ctx.charge(1)
    if _length(recv) == 0:
        raise Fault("RuntimeError", "head of empty sequence")
    match recv:
        case Str(text):
            return CharV(text[0])
        case ListV(items):
            return items[0]
    raise Fault("TypeError", "head needs a sequence")


def _bi_last(ctx, recv, args, lam):
    ctx.charge(1)
    if _length(recv) == 0:
        raise Fault("RuntimeError", "last of empty sequence")
    match recv:
        case Str(text):
            return CharV(text[-1])
        case ListV(items):
            return items[-1]
    raise Fault("TypeError", "last needs a sequence")


def _bi_reverse(ctx, recv, args, lam):
    ctx.charge(_length(recv))
    match recv:
        case Str(text):
            return Str(text[::-1])
        case ListV(items):
            return ListV(items[::-1])
    raise Fault("TypeError", "reverse needs a sequence")


def _bi_distinct(ctx, recv, args, lam):
    elems = _elems(recv)
    ctx.charge(len(elems))
    seen: dict[Value, None] = {}
    kept = []
    for e in elems:
        if e not in seen:
            seen[e] = None
            kept.append(e)
    return _rebuild(recv, kept)


def _bi_sorted(ctx, recv, args, lam):
    elems = _elems(recv)
    ctx.charge(len(elems))
    keyed = sorted(elems, key=lambda e: _sort_key(ctx, e))
    return _rebuild(recv, keyed)


def _extreme(ctx, recv, want_max: bool, name: str):
    elems = _elems(recv)
    if not elems:
        raise Fault("RuntimeError", f"empty.{name}")
    ctx.charge(len(elems))
    best = elems[0]
    best_key = _sort_key(ctx, best)
    for e in elems[1:]:
        k = _sort_key(ctx, e)
        if (k > best_key) if want_max else (k < best_key):
            best, best_key = e, k
    return best


def _bi_min(ctx, recv, args, lam):
    return _extreme(ctx, recv, False, "min")


def _bi_max(ctx, recv, args, lam):
    return _extreme(ctx, recv, True, "max")


def _extreme_by(ctx, recv, lam, want_max: bool, name: str):
    elems = _elems(recv)
    if not elems:
        raise Fault("RuntimeError", f"empty.{name}")
    best = elems[0]
    ctx.charge(1)
    best_key = _sort_key(ctx, lam(ctx, best))
    for e in elems[1:]:
        ctx.charge(1)
        k = _sort_key(ctx, lam(ctx, e))
        # Strict comparison keeps the first element on ties.
        if (k > best_key) if want_max else (k < best_key):
            best, best_key = e, k
    return best


def _bi_max_by(ctx, recv, args, lam):
    return _extreme_by(ctx, recv, lam, True, "maxBy")


def _bi_min_by(ctx, recv, args, lam):
    return _extreme_by(ctx, recv, lam, False, "minBy")


def _bi_sum(ctx, recv, args, lam):
    elems = _elems(recv)
    ctx.charge(len(elems))
    total = 0
    for e in elems:
        if not isinstance(e, IntV):
            raise Fault("TypeError", "sum needs integer elements")
        total = wrap64(total + e.value)
    return IntV(total)


def _bi_length(ctx, recv, args, lam):
    ctx.charge(1)
    return IntV(_length(recv))


def _bi_mk_string(ctx, recv, args, lam):
    sep = args[0] if args else ""
    elems = _elems(recv)
    ctx.charge(len(elems))
    return Str(sep.join(scala_show(e) for e in elems))


def _bi_split(ctx, recv, args, lam):
    sep = args[0]
    if not isinstance(recv, Str):
        raise Fault("TypeError", "split needs a string")
    if sep == "":
        raise Fault("RuntimeError", "empty separator")
    ctx.charge(len(recv.text) + 1)
    if recv.text == "":
        return ListV((Str(""),), elem_type=None)
    parts = recv.text.split(sep)
    while parts and parts[-1] == "":
        parts.pop()
    return ListV(tuple(Str(p) for p in parts))


def _bi_sliding(ctx, recv, args, lam):
    n = args[0]
    if n <= 0:
        raise Fault("RuntimeError", "sliding window size must be positive")
    size = _length(recv)
    ctx.charge(max(1, size))
    match recv:
        case Str(text):
            if size == 0:
                return ListV(())
            if size <= n:
                return ListV((Str(text),))
            ctx.charge(size - n)
            return ListV(tuple(Str(text[i: i + n]) for i in range(size - n + 1)))
        case ListV(items):
            if size == 0:
                return ListV(())
            if size <= n:
                return ListV((ListV(items),))
            ctx.charge(size - n)
            return ListV(tuple(ListV(items[i: i + n]) for i in range(size - n + 1)))
    raise Fault("TypeError", "sliding needs a sequence")


def _bi_grouped(ctx, recv, args, lam):
    n = args[0]
    if n <= 0:
        raise Fault("RuntimeError", "group size must be positive")
    size = _length(recv)
    ctx.charge(max(1, size))
    match recv:
        case Str(text):
            return ListV(tuple(Str(text[i: i + n]) for i in range(0, size, n)))
        case ListV(items):
            return ListV(tuple(ListV(items[i: i + n]) for i in range(0, size, n)))
    raise Fault("TypeError", "grouped needs a sequence")


def _bi_zip_with_index(ctx, recv, args, lam):
    elems = _elems(recv)
    ctx.charge(len(elems))
    return ListV(tuple(PairV(e, IntV(i)) for i, e in enumerate(elems)))


def _bi_zip_input_tail(ctx, recv, args, lam):
    original = ctx.original_input
    if _length(original) == 0:
        raise Fault("RuntimeError", "tail of empty sequence")
    other = _elems(original)[1:]
    elems = _elems(recv)
    k = min(len(elems), len(other))
    ctx.charge(max(1, k))
    return ListV(tuple(PairV(elems[i], other[i]) for i in range(k)))


def _bi_drop_half_of_input(ctx, recv, args, lam):
    n = _length(ctx.original_input) // 2
    ctx.charge(1)
    match recv:
        case Str(text):
            return Str(text[n:])
        case ListV(items):
            return ListV(items[n:])
    raise Fault("TypeError", "drop needs a sequence")


def _bi_map(ctx, recv, args, lam):
    match recv:
        case Str(text):
            out = []
            for c in text:
                ctx.charge(1)
                out.append(lam(ctx, CharV(c)))
            if all(isinstance(v, CharV) for v in out):
                return Str("".join(v.char for v in out))  # type: ignore[union-attr]
            return ListV(tuple(out))
        case ListV(items):
            out = []
            for e in items:
                ctx.charge(1)
                out.append(lam(ctx, e))
            return ListV(tuple(out))
        case MapV():
            out = []
            for k, val in map_entries_in_order(recv):
                ctx.charge(1)
                out.append(lam(ctx, PairV(k, val)))
            if out and all(isinstance(v, PairV) for v in out):
                return MapV(tuple((p.first, p.second) for p in out))  # type: ignore[union-attr]
            return ListV(tuple(out)) if out else MapV(())
    raise Fault("TypeError", "map needs a collection")


def _filter_impl(ctx, recv, lam, keep_when: bool):
    match recv:
        case MapV():
            kept = []
            for k, val in map_entries_in_order(recv):
                ctx.charge(1)
                if _want_bool(lam(ctx, PairV(k, val))) is keep_when:
                    kept.append((k, val))
            return MapV(tuple(kept))
        case _:
            elems = _elems(recv)
            out = []
            for e in elems:
                ctx.charge(1)
                if _want_bool(lam(ctx, e)) is keep_when:
                    out.append(e)
            return _rebuild(recv, out)


def _bi_filter(ctx, recv, args, lam):
    return _filter_impl(ctx, recv, lam, True)


def _bi_filter_not(ctx, recv, args, lam):
    return _filter_impl(ctx, recv, lam, False)


def _bi_count(ctx, recv, args, lam):
    elems = _elems(recv)
    n = 0
    for e in elems:
        ctx.charge(1)
        if _want_bool(lam(ctx, e)):
            n += 1
    return IntV(n)


def _bi_take_while(ctx, recv, args, lam):
    elems = _elems(recv)
    out = []
    for e in elems:
        ctx.charge(1)
        if not _want_bool(lam(ctx, e)):
            break
        out.append(e)
    return _rebuild(recv, out)


def _bi_group_by(ctx, recv, args, lam):
    elems = _elems(recv)
    groups: dict[Value, list[Value]] = {}
    for e in elems:
        ctx.charge(1)
        groups.setdefault(lam(ctx, e), []).append(e)
    # Group keys enter in first-encounter order; display order is the
    # map's own business.
    return MapV(tuple((k, _rebuild(recv, vs)) for k, vs in groups.items()))


def _bi_to_map(ctx, recv, args, lam):
    match recv:
        case MapV():
            ctx.charge(1)
            return recv
        case ListV(items):
            ctx.charge(max(1, len(items)))
            pairs = [_want_pair(e) for e in items]
            return MapV(tuple((p.first, p.second) for p in pairs))
    raise Fault("TypeError", "toMap needs a list of pairs")


def _bi_to_list(ctx, recv, args, lam):
    ctx.charge(max(1, _length(recv)))
    match recv:
        case ListV():
            return recv
        case Str() | MapV():
            return ListV(tuple(_elems(recv)))
    raise Fault("TypeError", "toList needs a collection")


def _bi_first(ctx, recv, args, lam):
    ctx.charge(1)
    return _want_pair(recv).first


def _bi_second(ctx, recv, args, lam):
    ctx.charge(1)
    return _want_pair(recv).second


BUILTINS: dict[str, Builtin] = {
    b.name: b
    for b in [
        Builtin("take", _bi_take, ("int",)),
        Builtin("drop", _bi_drop, ("int",)),
        Builtin("takeRight", _bi_take_right, ("int",)),
        Builtin("dropRight", _bi_drop_right, ("int",)),
        Builtin("tail", _bi_tail),
        Builtin("head", _bi_head),
        Builtin("last", _bi_last),
        Builtin("reverse", _bi_reverse),
        Builtin("distinct", _bi_distinct),
        Builtin("sorted", _bi_sorted),
        Builtin("min", _bi_min),
        Builtin("max", _bi_max),
        Builtin("maxBy", _bi_max_by, (), True),
        Builtin("minBy", _bi_min_by, (), True),
        Builtin("sum", _bi_sum),
        Builtin("length", _bi_length),
        Builtin("mkString", _bi_mk_string, ("str",)),
        Builtin("split", _bi_split, ("str",)),
        Builtin("sliding", _bi_sliding, ("int",)),
        Builtin("grouped", _bi_grouped, ("int",)),
        Builtin("zipWithIndex", _bi_zip_with_index),
        Builtin("zipInputTail", _bi_zip_input_tail),
        Builtin("dropHalfOfInput", _bi_drop_half_of_input),
        Builtin("map", _bi_map, (), True),
        Builtin("filter", _bi_filter, (), True),
        Builtin("filterNot", _bi_filter_not, (), True),
        Builtin("count", _bi_count, (), True),
        Builtin("takeWhile", _bi_take_while, (), True),
        Builtin("groupBy", _bi_group_by, (), True),
        Builtin("toMap", _bi_to_map),
        Builtin("toList", _bi_to_list),
        Builtin("first", _bi_first),
        Builtin("second", _bi_second),
    ]
}


# --- cataloged lambdas ------------------------------------------------------
#
# Vocabularies may only reference these by name; there is no lambda
# synthesis. Each takes the element value and returns a value or raises
# Fault. Comparisons against literals follow value equality, so a Char
# element never equals a String literal.


def _jdiv(a: int, b: int) -> int:
    if b == 0:
        raise Fault("RuntimeError", "/ by zero")
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap64(q)


def _lam_identity(ctx, v):
    return v


def _lam_pair_with_one(ctx, v):
    return PairV(v, IntV(1))


def _lam_first(ctx, v):
    return _want_pair(v).first


def _lam_second(ctx, v):
    return _want_pair(v).second


def _lam_first_with_one(ctx, v):
    return PairV(_want_pair(v).first, IntV(1))


def _lam_first_to_int(ctx, v):
    f = _want_pair(v).first
    if isinstance(f, CharV):
        return IntV(ord(f.char))
    if isinstance(f, IntV):
        return f
    raise Fault("TypeError", "toInt needs a char")


def _lam_first_str_plus_second(ctx, v):
    p = _want_pair(v)
    return Str(scala_show(p.first) + scala_show(p.second))


def _lam_first_with_second_length(ctx, v):
    p = _want_pair(v)
    return PairV(p.first, IntV(_length(p.second)))


def _lam_second_length(ctx, v):
    return IntV(_length(_want_pair(v).second))


def _lam_ne_newline_str(ctx, v):
    # c != "\n" with a String literal: a Char element never equals it.
    return BoolV(v != Str("\n"))


def _lam_is_cr_or_nl(ctx, v):
    return BoolV(v == CharV("\r") or v == CharV("\n"))


def _lam_nonempty(ctx, v):
    return BoolV(_length(v) > 0)


def _lam_always_true(ctx, v):
    return BoolV(True)


def _lam_square(ctx, v):
    if not isinstance(v, IntV):
        raise Fault("TypeError", "square needs an integer")
    return IntV(wrap64(v.value * v.value))


def _lam_sorted_chars(ctx, v):
    if not isinstance(v, Str):
        raise Fault("TypeError", "sorted needs a string")
    ctx.charge(len(v.text))
    return Str("".join(sorted(v.text)))


def _lam_str_to_int(ctx, v):
    if not isinstance(v, Str):
        raise Fault("TypeError", "toInt needs a string")
    text = v.text
    body = text[1:] if text[:1] in "+-" else text
    if not body or not body.isascii() or not body.isdigit():
        raise Fault("RuntimeError", f"number format: {text!r}")
    n = int(text)
    if not INT64_MIN <= n <= INT64_MAX:
        raise Fault("RuntimeError", f"number format: {text!r}")
    return IntV(n)


def _lam_char_to_int(ctx, v):
    if not isinstance(v, CharV):
        raise Fault("TypeError", "toInt needs a char")
    return IntV(ord(v.char))


def _lam_char_as_digit(ctx, v):
    if not isinstance(v, CharV):
        raise Fault("TypeError", "asDigit needs a char")
    c = v.char
    if "0" <= c <= "9":
        return IntV(ord(c) - ord("0"))
    if "a" <= c <= "z":
        return IntV(ord(c) - ord("a") + 10)
    if "A" <= c <= "Z":
        return IntV(ord(c) - ord("A") + 10)
    return IntV(-1)


def _lam_int_to_str(ctx, v):
    if not isinstance(v, IntV):
        raise Fault("TypeError", "toString needs an integer")
    return Str(str(v.value))


def _lam_gt_zero(ctx, v):
    if not isinstance(v, IntV):
        raise Fault("TypeError", "comparison needs an integer")
    return BoolV(v.value > 0)


def _lam_list_avg(ctx, v):
    if not isinstance(v, ListV):
        raise Fault("TypeError", "average needs a list")
    if not v.items:
        raise Fault("RuntimeError", "/ by zero")
    total = 0
    for e in v.items:
        if not isinstance(e, IntV):
            raise Fault("TypeError", "average needs integer elements")
        ctx.charge(1)
        total = wrap64(total + e.value)
    return IntV(_jdiv(total, len(v.items)))


def _lam_list_sum(ctx, v):
    if not isinstance(v, ListV):
        raise Fault("TypeError", "sum needs a list")
    total = 0
    for e in v.items:
        if not isinstance(e, IntV):
            raise Fault("TypeError", "sum needs integer elements")
        ctx.charge(1)
        total = wrap64(total + e.value)
    return IntV(total)


def _lam_starts_with_hash(ctx, v):
    if not isinstance(v, Str):
        return BoolV(False)
    return BoolV(v.text.startswith("#"))


def _lam_is_space(ctx, v):
    return BoolV(v == CharV(" "))


def _lam_swap(ctx, v):
    p = _want_pair(v)
    return PairV(p.second, p.first)


def _lam_str_take_4(ctx, v):
    if not isinstance(v, Str):
        raise Fault("TypeError", "take needs a string")
    return Str(v.text[:4])


def _lam_mkstring_space(ctx, v):
    if not isinstance(v, ListV):
        raise Fault("TypeError", "mkString needs a list")
    ctx.charge(len(v.items))
    return Str(" ".join(scala_show(e) for e in v.items))


def _lam_eq_char_one(ctx, v):
    return BoolV(v == CharV("1"))


LAMBDAS: dict[str, LambdaFn] = {
    "identity": _lam_identity,
    "pair_with_one": _lam_pair_with_one,
    "first": _lam_first,
    "second": _lam_second,
    "first_with_one": _lam_first_with_one,
    "first_to_int": _lam_first_to_int,
    "first_str_plus_second": _lam_first_str_plus_second,
    "first_with_second_length": _lam_first_with_second_length,
    "second_length": _lam_second_length,
    "ne_newline_str": _lam_ne_newline_str,
    "is_cr_or_nl": _lam_is_cr_or_nl,
    "nonempty": _lam_nonempty,
    "always_true": _lam_always_true,
    "square": _lam_square,
    "sorted_chars": _lam_sorted_chars,
    "str_to_int": _lam_str_to_int,
    "char_to_int": _lam_char_to_int,
    "char_as_digit": _lam_char_as_digit,
    "int_to_str": _lam_int_to_str,
    "gt_zero": _lam_gt_zero,
    "list_avg": _lam_list_avg,
    "list_sum": _lam_list_sum,
    "starts_with_hash": _lam_starts_with_hash,
    "is_space": _lam_is_space,
    "swap": _lam_swap,
    "str_take_4": _lam_str_take_4,
    "mkstring_space": _lam_mkstring_space,
    "eq_char_one": _lam_eq_char_one,
}
