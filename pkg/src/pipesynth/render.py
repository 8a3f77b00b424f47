"""Display rendering of values and the literal grammar that parses it back.

Rendering rules: strings are always double-quoted, chars are bare, pairs are
"(a,b)", lists are "List(...)", maps are "Map(k->v,...)" in Scala iteration
order, with no spaces after commas. Renderings longer than the width budget
are cut at an element boundary of the outermost collection and end in "...".
"""

from __future__ import annotations

from dataclasses import dataclass

from .scala_order import map_entries_in_order
from .values import (
    BoolV,
    CharV,
    ErrorV,
    IntV,
    ListV,
    MapV,
    PairV,
    SemType,
    Str,
    TChar,
    TList,
    TMap,
    TPair,
    TStr,
    Value,
)

MIN_RENDER_WIDTH = 8

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


@dataclass(frozen=True)
class Rendered:
    """A rendering plus whether it was truncated to fit."""

    text: str
    truncated: bool


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def render_full(value: Value) -> str:
    """The untruncated rendering of a value."""
    match value:
        case Str(text):
            return f'"{_escape(text)}"'
        case IntV(v):
            return str(v)
        case CharV(c):
            return c
        case BoolV(v):
            return "true" if v else "false"
        case ListV(items, _):
            return "List(" + ",".join(render_full(x) for x in items) + ")"
        case PairV(a, b):
            return "(" + render_full(a) + "," + render_full(b) + ")"
        case MapV():
            parts = (render_full(k) + "->" + render_full(v) for k, v in map_entries_in_order(value))
            return "Map(" + ",".join(parts) + ")"
        case ErrorV(kind, message):
            return f"{kind}: {message}" if message else kind
    raise TypeError(f"not a Value: {value!r}")


def _element_strings(value: Value) -> tuple[str, list[str]] | None:
    """Opener and fully-rendered element strings, for collection values only."""
    match value:
        case ListV(items, _):
            return "List(", [render_full(x) for x in items]
        case MapV():
            return "Map(", [render_full(k) + "->" + render_full(v) for k, v in map_entries_in_order(value)]
        case PairV(a, b):
            return "(", [render_full(a), render_full(b)]
        case _:
            return None


def render_value(value: Value, max_chars: int = 80) -> Rendered:
    """Render a value within a width budget, cutting at element boundaries."""
    if max_chars < MIN_RENDER_WIDTH:
        raise ValueError(f"max_chars must be at least {MIN_RENDER_WIDTH}")
    full = render_full(value)
    if len(full) <= max_chars:
        return Rendered(full, False)

    parts = _element_strings(value)
    if parts is None:
        return Rendered(full[: max_chars - 3] + "...", True)
    opener, elems = parts
    kept: list[str] = []
    used = len(opener)
    for elem in elems:
        extra = len(elem) + (1 if kept else 0)
        # Reserve room for the ",...)" tail after the kept elements.
        if used + extra + 5 <= max_chars:
            kept.append(elem)
            used += extra
        else:
            break
    if kept:
        return Rendered(opener + ",".join(kept) + ",...)", True)
    if len(opener) + 4 <= max_chars:
        return Rendered(opener + "...)", True)
    return Rendered(full[: max_chars - 3] + "...", True)


# ---------------------------------------------------------------------------
# Literal parsing (inverse of render_full on non-error values)
# ---------------------------------------------------------------------------

class LiteralError(ValueError):
    """A value literal that does not parse."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_value_literal(text: str, expected: SemType | None = None) -> Value:
    """Parse a value written in the rendering grammar.

    ``expected`` disambiguates bare single characters: a lone digit parses as
    an Int unless a Char is expected. Strings must be quoted.
    """
    value, pos = _parse_at(text, 0, expected)
    pos = _ws(text, pos)
    if pos != len(text):
        raise LiteralError(f"trailing characters {text[pos:]!r}", pos)
    return value


def _ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t":
        pos += 1
    return pos


def _parse_at(text: str, pos: int, expected: SemType | None) -> tuple[Value, int]:
    pos = _ws(text, pos)
    if pos >= len(text):
        raise LiteralError("unexpected end of literal", pos)
    c = text[pos]
    if c == '"':
        return _parse_string(text, pos)
    if text.startswith("List(", pos):
        elem_t = expected.elem if isinstance(expected, TList) else None
        items, pos = _parse_seq(text, pos + 5, elem_t)
        return ListV(tuple(items), elem_t if not items else None), pos
    if text.startswith("Map(", pos):
        return _parse_map(text, pos + 4, expected)
    if c == "(":
        ta = expected.first if isinstance(expected, TPair) else None
        tb = expected.second if isinstance(expected, TPair) else None
        a, pos = _parse_at(text, pos + 1, ta)
        pos = _ws(text, pos)
        if pos >= len(text) or text[pos] != ",":
            raise LiteralError("expected ',' in pair", pos)
        b, pos = _parse_at(text, pos + 1, tb)
        pos = _ws(text, pos)
        if pos >= len(text) or text[pos] != ")":
            raise LiteralError("expected ')' closing pair", pos)
        return PairV(a, b), pos + 1
    if text.startswith("true", pos):
        return BoolV(True), pos + 4
    if text.startswith("false", pos):
        return BoolV(False), pos + 5
    if c == "-" or c.isdigit():
        end = pos + 1
        while end < len(text) and text[end].isdigit():
            end += 1
        digits = text[pos:end]
        if digits == "-":
            raise LiteralError("lone '-' is not a number", pos)
        if len(digits) == 1 and digits.isdigit() and isinstance(expected, TChar):
            return CharV(digits), end
        return IntV(int(digits)), end
    if c not in ",()[]" :
        # A bare non-digit character is a char literal.
        return CharV(c), pos + 1
    raise LiteralError(f"cannot parse value at {text[pos:]!r}", pos)


def _parse_string(text: str, pos: int) -> tuple[Str, int]:
    out: list[str] = []
    i = pos + 1
    while i < len(text):
        c = text[i]
        if c == "\\":
            if i + 1 >= len(text) or text[i + 1] not in _UNESCAPES:
                raise LiteralError("bad escape", i)
            out.append(_UNESCAPES[text[i + 1]])
            i += 2
        elif c == '"':
            return Str("".join(out)), i + 1
        else:
            out.append(c)
            i += 1
    raise LiteralError("unterminated string", pos)


def _parse_seq(text: str, pos: int, elem_t: SemType | None) -> tuple[list[Value], int]:
    items: list[Value] = []
    pos = _ws(text, pos)
    if pos < len(text) and text[pos] == ")":
        return items, pos + 1
    while True:
        value, pos = _parse_at(text, pos, elem_t)
        items.append(value)
        pos = _ws(text, pos)
        if pos >= len(text):
            raise LiteralError("unterminated collection", pos)
        if text[pos] == ",":
            pos += 1
            continue
        if text[pos] == ")":
            return items, pos + 1
        raise LiteralError(f"expected ',' or ')' at {text[pos:]!r}", pos)


def _parse_map(text: str, pos: int, expected: SemType | None) -> tuple[MapV, int]:
    tk = expected.key if isinstance(expected, TMap) else None
    tv = expected.value if isinstance(expected, TMap) else None
    entries: list[tuple[Value, Value]] = []
    pos = _ws(text, pos)
    if pos < len(text) and text[pos] == ")":
        return MapV(tuple(entries)), pos + 1
    while True:
        k, pos = _parse_at(text, pos, tk)
        pos = _ws(text, pos)
        if not text.startswith("->", pos):
            raise LiteralError("expected '->' in map entry", pos)
        v, pos = _parse_at(text, pos + 2, tv)
        entries.append((k, v))
        pos = _ws(text, pos)
        if pos >= len(text):
            raise LiteralError("unterminated map", pos)
        if text[pos] == ",":
            pos += 1
            continue
        if text[pos] == ")":
            return MapV(tuple(entries)), pos + 1
        raise LiteralError(f"expected ',' or ')' at {text[pos:]!r}", pos)


def value_to_wire(value: Value) -> str | dict:
    """Log/wire encoding: literal text for data, a tagged record for errors."""
    if isinstance(value, ErrorV):
        return {"error": value.kind, "message": value.message}
    return render_full(value)


def value_from_wire(w: str | dict, expected: SemType | None = None) -> Value:
    """Inverse of value_to_wire."""
    if isinstance(w, dict):
        kind = w.get("error")
        if kind not in ErrorV.KINDS:
            raise LiteralError(f"bad error record {w!r}", 0)
        return ErrorV(kind, w.get("message", ""))
    return parse_value_literal(w, expected)
