"""Linear pipeline programs: token sequences with rendering, parsing, typing.

A program is just the ordered tuple of vocabulary token ids; the empty
program is the identity. Rendering produces the method-chain text
"input.f.g.h"; parsing inverts it with longest-match token scanning, since
display texts themselves contain dots (zip(input.tail)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .descriptors import UnknownTokenError, Vocabulary
from .values import SemType


@dataclass(frozen=True, order=True)
class Program:
    """An ordered pipeline of vocabulary letters."""

    tokens: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    def extended(self, token_id: str) -> "Program":
        return Program(self.tokens + (token_id,))

    def prefix(self, k: int) -> "Program":
        return Program(self.tokens[:k])


class ParseError(ValueError):
    """Unparseable program text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class TypingFailure:
    """The first letter whose receiver pattern rejects the incoming type."""

    index: int
    token_id: str


def render_program(p: Program, v: Vocabulary | None = None) -> str:
    """Method-chain text: "input" followed by one ".display" per letter."""
    parts = ["input"]
    for tok in p.tokens:
        display = v[tok].display_text if v is not None else tok
        parts.append(display)
    return ".".join(parts)


def parse_program(text: str, v: Vocabulary) -> Program:
    """Inverse of render_program. Longest display-text match at each dot."""
    if not text.startswith("input"):
        raise ParseError("expected 'input'", 0)
    pos = len("input")
    displays = sorted(
        ((letter.display_text, letter.token_id) for letter in v.letters),
        key=lambda d: -len(d[0]),
    )
    tokens = []
    while pos < len(text):
        if text[pos] != ".":
            raise ParseError("expected '.'", pos)
        pos += 1
        rest = text[pos:]
        for display, token_id in displays:
            if rest.startswith(display):
                tokens.append(token_id)
                pos += len(display)
                break
        else:
            raise ParseError(f"no letter matches {rest[:30]!r}", pos)
    return Program(tuple(tokens))


def type_of(p: Program, v: Vocabulary) -> SemType | TypingFailure:
    """Fold the input type through each letter's receiver pattern."""
    cur = v.input_type
    for i, tok in enumerate(p.tokens):
        letter = v[tok]
        nxt = letter.result_type(cur)
        if nxt is None:
            return TypingFailure(i, tok)
        cur = nxt
    return cur


__all__ = [
    "Program",
    "ParseError",
    "TypingFailure",
    "UnknownTokenError",
    "render_program",
    "parse_program",
    "type_of",
]
