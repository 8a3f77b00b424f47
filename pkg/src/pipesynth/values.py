"""Runtime values and semantic types for the pipeline language.

Values are immutable and hashable so they can serve as memoization keys.
Maps remember insertion order; equality and hashing ignore it.
"""

from __future__ import annotations

from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# Value domain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Str:
    """A string value."""

    text: str


@dataclass(frozen=True)
class IntV:
    """A 64-bit signed integer value (arithmetic wraps like a JVM Long)."""

    value: int


@dataclass(frozen=True)
class CharV:
    """A single unicode scalar."""

    char: str

    def __post_init__(self) -> None:
        if len(self.char) != 1:
            raise ValueError(f"CharV needs exactly one character, got {self.char!r}")


@dataclass(frozen=True)
class BoolV:
    """A boolean value."""

    value: bool


@dataclass(frozen=True, eq=False)
class ListV:
    """An ordered list of values.

    ``elem_type`` annotates the element type of an empty list when it is
    statically known; it takes no part in equality or hashing.
    """

    items: tuple["Value", ...]
    elem_type: "SemType | None" = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ListV):
            return NotImplemented
        return self.items == other.items

    def __hash__(self) -> int:
        return hash(("ListV", self.items))

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class PairV:
    """A 2-tuple of values."""

    first: "Value"
    second: "Value"


@dataclass(frozen=True, eq=False)
class MapV:
    """An insertion-ordered map with structurally-unique keys.

    Duplicate keys collapse at construction: the first occurrence keeps its
    position, the last occurrence keeps its value (like repeated `updated`
    calls on a Scala map). Equality and hashing are order-insensitive.
    """

    entries: tuple[tuple["Value", "Value"], ...]

    def __post_init__(self) -> None:
        seen: dict[Value, int] = {}
        out: list[tuple[Value, Value]] = []
        for k, v in self.entries:
            if k in seen:
                out[seen[k]] = (k, v)
            else:
                seen[k] = len(out)
                out.append((k, v))
        if len(out) != len(self.entries):
            object.__setattr__(self, "entries", tuple(out))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MapV):
            return NotImplemented
        return frozenset(self.entries) == frozenset(other.entries)

    def __hash__(self) -> int:
        return hash(("MapV", frozenset(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ErrorV:
    """A total-program failure: TypeError, RuntimeError, or Timeout."""

    kind: str
    message: str = ""

    KINDS = ("TypeError", "RuntimeError", "Timeout")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown error kind {self.kind!r}")


Value = Str | IntV | CharV | BoolV | ListV | PairV | MapV | ErrorV


# ---------------------------------------------------------------------------
# Semantic types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TStr:
    """String type."""


@dataclass(frozen=True)
class TInt:
    """Integer type."""


@dataclass(frozen=True)
class TChar:
    """Character type."""


@dataclass(frozen=True)
class TBool:
    """Boolean type."""


@dataclass(frozen=True)
class TList:
    """List type with element type."""

    elem: "SemType"


@dataclass(frozen=True)
class TPair:
    """Pair type."""

    first: "SemType"
    second: "SemType"


@dataclass(frozen=True)
class TMap:
    """Map type with key and value types."""

    key: "SemType"
    value: "SemType"


@dataclass(frozen=True)
class TVar:
    """A type variable inside a receiver pattern."""

    name: str


SemType = TStr | TInt | TChar | TBool | TList | TPair | TMap | TVar

# Placeholder element type for empty collections whose contents are unknown.
T_UNKNOWN = TVar("?")


class TypeSyntaxError(ValueError):
    """A type expression that does not parse."""


def render_type(t: SemType) -> str:
    """Format a type the way vocabulary files spell it, e.g. List[Pair[Char,Int]]."""
    match t:
        case TStr():
            return "Str"
        case TInt():
            return "Int"
        case TChar():
            return "Char"
        case TBool():
            return "Bool"
        case TList(elem):
            return f"List[{render_type(elem)}]"
        case TPair(a, b):
            return f"Pair[{render_type(a)},{render_type(b)}]"
        case TMap(k, v):
            return f"Map[{render_type(k)},{render_type(v)}]"
        case TVar(name):
            return name
    raise TypeError(f"not a SemType: {t!r}")


def parse_type(text: str) -> SemType:
    """Parse a type expression; single uppercase letters are type variables."""
    t, pos = _parse_type_at(text, 0)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise TypeSyntaxError(f"trailing characters at {pos} in {text!r}")
    return t


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] == " ":
        pos += 1
    return pos


def _parse_type_at(text: str, pos: int) -> tuple[SemType, int]:
    pos = _skip_ws(text, pos)
    for name, ctor in (("Str", TStr), ("Int", TInt), ("Char", TChar), ("Bool", TBool)):
        if text.startswith(name, pos):
            return ctor(), pos + len(name)
    for name, arity in (("List", 1), ("Pair", 2), ("Map", 2)):
        if text.startswith(name + "[", pos):
            pos += len(name) + 1
            args = []
            for i in range(arity):
                arg, pos = _parse_type_at(text, pos)
                args.append(arg)
                pos = _skip_ws(text, pos)
                want = "," if i < arity - 1 else "]"
                if pos >= len(text) or text[pos] != want:
                    raise TypeSyntaxError(f"expected {want!r} at {pos} in {text!r}")
                pos += 1
            if arity == 1:
                return TList(args[0]), pos
            if name == "Pair":
                return TPair(args[0], args[1]), pos
            return TMap(args[0], args[1]), pos
    if pos < len(text) and text[pos].isalpha() and text[pos].isupper():
        return TVar(text[pos]), pos + 1
    raise TypeSyntaxError(f"cannot parse type at {pos} in {text!r}")


def match_type(pattern: SemType, concrete: SemType, bindings: dict[str, SemType] | None = None) -> dict[str, SemType] | None:
    """Match a receiver pattern against a concrete type; returns variable bindings or None."""
    if bindings is None:
        bindings = {}
    match pattern:
        case TVar(name):
            bound = bindings.get(name)
            if bound is None:
                bindings[name] = concrete
                return bindings
            return bindings if bound == concrete else None
        case TList(elem):
            if isinstance(concrete, TList):
                return match_type(elem, concrete.elem, bindings)
            return None
        case TPair(a, b):
            if isinstance(concrete, TPair):
                inner = match_type(a, concrete.first, bindings)
                return None if inner is None else match_type(b, concrete.second, inner)
            return None
        case TMap(k, v):
            if isinstance(concrete, TMap):
                inner = match_type(k, concrete.key, bindings)
                return None if inner is None else match_type(v, concrete.value, inner)
            return None
        case _:
            return bindings if pattern == concrete else None


def substitute(t: SemType, bindings: dict[str, SemType]) -> SemType:
    """Replace type variables in a return-type template by their bindings."""
    match t:
        case TVar(name):
            try:
                return bindings[name]
            except KeyError:
                raise TypeSyntaxError(f"unbound type variable {name!r}") from None
        case TList(elem):
            return TList(substitute(elem, bindings))
        case TPair(a, b):
            return TPair(substitute(a, bindings), substitute(b, bindings))
        case TMap(k, v):
            return TMap(substitute(k, bindings), substitute(v, bindings))
        case _:
            return t


def type_check(value: Value, t: SemType) -> bool:
    """Decide whether a value inhabits a type. Errors inhabit no type."""
    match value:
        case ErrorV():
            return False
        case Str():
            return isinstance(t, TStr)
        case IntV():
            return isinstance(t, TInt)
        case CharV():
            return isinstance(t, TChar)
        case BoolV():
            return isinstance(t, TBool)
        case ListV(items, elem_type):
            if not isinstance(t, TList):
                return False
            if not items:
                # An un-annotated empty list inhabits every list type.
                return elem_type is None or elem_type == T_UNKNOWN or elem_type == t.elem
            return all(type_check(x, t.elem) for x in items)
        case PairV(a, b):
            return isinstance(t, TPair) and type_check(a, t.first) and type_check(b, t.second)
        case MapV(entries):
            if not isinstance(t, TMap):
                return False
            return all(type_check(k, t.key) and type_check(v, t.value) for k, v in entries)
    raise TypeError(f"not a Value: {value!r}")


def principal_type(value: Value) -> SemType | None:
    """The unique type of a non-error value; None for errors.

    Empty collections without annotations get the `?` placeholder, which
    type_check treats as a wildcard.
    """
    match value:
        case ErrorV():
            return None
        case Str():
            return TStr()
        case IntV():
            return TInt()
        case CharV():
            return TChar()
        case BoolV():
            return TBool()
        case ListV(items, elem_type):
            if items:
                elem = principal_type(items[0])
                assert elem is not None
                return TList(elem)
            return TList(elem_type if elem_type is not None else T_UNKNOWN)
        case PairV(a, b):
            ta, tb = principal_type(a), principal_type(b)
            assert ta is not None and tb is not None
            return TPair(ta, tb)
        case MapV(entries):
            if entries:
                k, v = entries[0]
                tk, tv = principal_type(k), principal_type(v)
                assert tk is not None and tv is not None
                return TMap(tk, tv)
            return TMap(T_UNKNOWN, T_UNKNOWN)
    raise TypeError(f"not a Value: {value!r}")


def count_cells(value: Value) -> int:
    """Size measure used by the evaluation limits: nodes plus string payload."""
    match value:
        case Str(text):
            return 1 + len(text)
        case IntV() | CharV() | BoolV() | ErrorV():
            return 1
        case ListV(items, _):
            return 1 + sum(count_cells(x) for x in items)
        case PairV(a, b):
            return 1 + count_cells(a) + count_cells(b)
        case MapV(entries):
            return 1 + sum(count_cells(k) + count_cells(v) for k, v in entries)
    raise TypeError(f"not a Value: {value!r}")
