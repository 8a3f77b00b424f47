"""Seeded random input generation.

Task files describe their input distribution as a small spec record; the
same specs drive registry identity checks, the banned-letter demonstrator,
and property tests. Everything is driven by an explicit random.Random so
runs are reproducible from a seed.
"""

from __future__ import annotations

import random
import string
from typing import Callable

from .values import (
    BoolV,
    CharV,
    IntV,
    ListV,
    MapV,
    PairV,
    SemType,
    Str,
    TBool,
    TChar,
    TInt,
    TList,
    TMap,
    TPair,
    TStr,
    TVar,
    Value,
)

Generator = Callable[[random.Random], Value]

DEFAULT_ALPHABET = string.ascii_lowercase


class GeneratorSpecError(ValueError):
    """A generator spec record that names no known kind or is malformed."""


def _rand_word(rng: random.Random, alphabet: str, lo: int, hi: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def make_generator(spec: dict) -> Generator:
    """Compile a spec record into a draw function."""
    try:
        kind = spec["kind"]
    except (TypeError, KeyError):
        raise GeneratorSpecError(f"generator spec needs a kind: {spec!r}") from None
    alphabet = spec.get("alphabet", DEFAULT_ALPHABET)

    match kind:
        case "string":
            lo, hi = spec.get("min_len", 0), spec.get("max_len", 12)
            return lambda rng: Str(_rand_word(rng, alphabet, lo, hi))

        case "lines":
            # Text with newline-separated lines; optionally CR-terminated or
            # empty lines mixed in, plus a trailing newline.
            n_lo, n_hi = spec.get("min_lines", 1), spec.get("max_lines", 6)
            l_lo, l_hi = spec.get("min_line_len", 0), spec.get("max_line_len", 8)
            p_empty = spec.get("empty_line_prob", 0.25)
            p_cr = spec.get("cr_prob", 0.0)
            trailing = spec.get("trailing_newline", True)

            def gen_lines(rng: random.Random) -> Value:
                lines = []
                for _ in range(rng.randint(n_lo, n_hi)):
                    body = "" if rng.random() < p_empty else _rand_word(rng, alphabet, max(1, l_lo), l_hi)
                    if rng.random() < p_cr:
                        body += "\r"
                    lines.append(body)
                text = "\n".join(lines)
                if trailing and lines:
                    text += "\n"
                return Str(text)

            return gen_lines

        case "words":
            w_lo, w_hi = spec.get("min_words", 1), spec.get("max_words", 8)
            l_lo, l_hi = spec.get("min_word_len", 1), spec.get("max_word_len", 7)
            sep = spec.get("sep", " ")

            def gen_words(rng: random.Random) -> Value:
                words = [
                    _rand_word(rng, alphabet, l_lo, l_hi)
                    for _ in range(rng.randint(w_lo, w_hi))
                ]
                return Str(sep.join(words))

            return gen_words

        case "int_list":
            n_lo, n_hi = spec.get("min_len", 0), spec.get("max_len", 10)
            v_lo, v_hi = spec.get("min_value", -99), spec.get("max_value", 99)
            return lambda rng: ListV(
                tuple(IntV(rng.randint(v_lo, v_hi)) for _ in range(rng.randint(n_lo, n_hi)))
            )

        case "string_list":
            n_lo, n_hi = spec.get("min_len", 0), spec.get("max_len", 8)
            l_lo, l_hi = spec.get("min_item_len", 1), spec.get("max_item_len", 7)
            prefix = spec.get("prefix", "")
            p_prefix = spec.get("prefix_prob", 0.0)

            def gen_string_list(rng: random.Random) -> Value:
                items = []
                for _ in range(rng.randint(n_lo, n_hi)):
                    w = _rand_word(rng, alphabet, l_lo, l_hi)
                    if prefix and rng.random() < p_prefix:
                        w = prefix + w
                    items.append(Str(w))
                return ListV(tuple(items))

            return gen_string_list

        case "permutation":
            # A shuffle of lo..hi inclusive, e.g. one sudoku row.
            lo, hi = spec.get("min_value", 1), spec.get("max_value", 9)

            def gen_perm(rng: random.Random) -> Value:
                xs = list(range(lo, hi + 1))
                rng.shuffle(xs)
                return ListV(tuple(IntV(x) for x in xs))

            return gen_perm

        case "of_type":
            t = spec["type"]
            size = spec.get("size", 6)
            if isinstance(t, str):
                from .values import parse_type

                t = parse_type(t)
            return lambda rng: generate_of_type(t, rng, size)

        case _:
            raise GeneratorSpecError(f"unknown generator kind {kind!r}")


def generate_of_type(t: SemType, rng: random.Random, size: int = 6) -> Value:
    """Generic structural generator for a concrete semantic type."""
    match t:
        case TStr():
            return Str(_rand_word(rng, DEFAULT_ALPHABET, 0, size))
        case TInt():
            return IntV(rng.randint(-99, 99))
        case TChar():
            return CharV(rng.choice(DEFAULT_ALPHABET))
        case TBool():
            return BoolV(rng.random() < 0.5)
        case TList(elem):
            n = rng.randint(0, size)
            return ListV(tuple(generate_of_type(elem, rng, max(1, size - 1)) for _ in range(n)))
        case TPair(a, b):
            return PairV(generate_of_type(a, rng, size), generate_of_type(b, rng, size))
        case TMap(k, v):
            n = rng.randint(0, size)
            return MapV(
                tuple(
                    (generate_of_type(k, rng, max(1, size - 1)),
                     generate_of_type(v, rng, max(1, size - 1)))
                    for _ in range(n)
                )
            )
        case TVar(_):
            return Str(_rand_word(rng, DEFAULT_ALPHABET, 0, size))
    raise GeneratorSpecError(f"cannot generate for type {t!r}")
