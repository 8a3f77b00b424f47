"""Vocabulary letters: partially-applied methods with typed receiver patterns.

A letter owns a stable token id (its display text), a pointer into the
builtin catalog with bound arguments, and one or more receiver alternatives.
Each alternative pairs a receiver pattern (at most one type variable) with a
return rule; "Self" in the return position means the matched receiver type.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .values import SemType, TVar, TypeSyntaxError, match_type, parse_type, substitute


@dataclass(frozen=True)
class TSelf:
    """Return-rule marker: the matched receiver type itself."""


@dataclass(frozen=True)
class Alternative:
    """One receiver-pattern/return-rule pairing of a letter."""

    receiver: SemType
    returns: SemType | TSelf


@dataclass(frozen=True)
class MethodDescriptor:
    """A vocabulary letter."""

    token_id: str
    builtin_op: str
    alternatives: tuple[Alternative, ...]
    bound_args: tuple[int | str, ...] = ()
    lambda_id: str | None = None
    display_text: str = ""

    def __post_init__(self) -> None:
        if not self.display_text:
            object.__setattr__(self, "display_text", self.token_id)

    def result_type(self, receiver: SemType) -> SemType | None:
        """Return type when applied to a receiver type, or None if inapplicable."""
        for alt in self.alternatives:
            bindings = match_type(alt.receiver, receiver)
            if bindings is None:
                continue
            if isinstance(alt.returns, TSelf):
                return receiver
            return substitute(alt.returns, bindings)
        return None


@dataclass(frozen=True)
class Vocabulary:
    """An ordered method vocabulary with its lambda catalog and input type."""

    name: str
    input_type: SemType
    letters: tuple[MethodDescriptor, ...]
    lambda_catalog: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        by_token = {}
        for letter in self.letters:
            if letter.token_id in by_token:
                raise DuplicateTokenError(letter.token_id)
            by_token[letter.token_id] = letter
        object.__setattr__(self, "_by_token", by_token)

    def __getitem__(self, token_id: str) -> MethodDescriptor:
        try:
            return self._by_token[token_id]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownTokenError(token_id) from None

    def __contains__(self, token_id: str) -> bool:
        return token_id in self._by_token  # type: ignore[attr-defined]

    def token_ids(self) -> tuple[str, ...]:
        return tuple(letter.token_id for letter in self.letters)


def applicable(vocab: Vocabulary, receiver: SemType) -> list[MethodDescriptor]:
    """The letters whose receiver pattern matches, in vocabulary order."""
    return [letter for letter in vocab.letters if letter.result_type(receiver) is not None]


class VocabularyError(ValueError):
    """A vocabulary or task document that fails validation."""


class SchemaError(VocabularyError):
    """A document field is missing or malformed; carries the field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DuplicateTokenError(VocabularyError):
    """Two letters share a token id."""

    def __init__(self, token_id: str):
        super().__init__(f"duplicate token id {token_id!r}")
        self.token_id = token_id


class UnknownBuiltinError(VocabularyError):
    """A letter names a builtin absent from the interpreter catalog."""

    def __init__(self, name: str):
        super().__init__(f"unknown builtin {name!r}")
        self.name = name


class UnknownTokenError(KeyError):
    """A token id absent from the vocabulary."""

    def __init__(self, token_id: str):
        super().__init__(token_id)
        self.token_id = token_id

    def __str__(self) -> str:
        return f"unknown token {self.token_id!r}"


def parse_receiver_pattern(text: str) -> tuple[SemType, ...]:
    """Parse a '|'-separated union of receiver patterns."""
    parts = [p.strip() for p in text.split("|")]
    patterns = []
    for part in parts:
        pattern = parse_type(part)
        if _count_vars(pattern) > 1:
            raise TypeSyntaxError(f"more than one type variable in {part!r}")
        patterns.append(pattern)
    return tuple(patterns)


def parse_return_rule(text: str, n_alternatives: int) -> tuple[SemType | TSelf, ...]:
    """Parse a return rule: one entry per receiver alternative, or one for all."""
    parts = [p.strip() for p in text.split("|")]
    rules: list[SemType | TSelf] = [TSelf() if p == "Self" else parse_type(p) for p in parts]
    if len(rules) == 1 and n_alternatives > 1:
        rules = rules * n_alternatives
    if len(rules) != n_alternatives:
        raise TypeSyntaxError(
            f"{len(rules)} return rules for {n_alternatives} receiver alternatives in {text!r}"
        )
    return tuple(rules)


def _count_vars(t: SemType) -> int:
    from .values import TList, TMap, TPair

    match t:
        case TVar():
            return 1
        case TList(elem):
            return _count_vars(elem)
        case TPair(first, second):
            return _count_vars(first) + _count_vars(second)
        case TMap(key, value):
            return _count_vars(key) + _count_vars(value)
        case _:
            return 0
