"""Deterministic map iteration order matching a Scala 2.12 immutable.Map.

Debug traces must render maps the way the reference walkthroughs show them,
and those walkthroughs were produced by a Scala REPL. Scala's immutable maps
keep insertion order up to four entries (Map1..Map4) and switch to a hash
trie beyond that, where iteration follows 5-bit chunks of an "improved"
hash code, least-significant chunk first. This module reproduces exactly
that order for our value domain.
"""

from __future__ import annotations

from .values import BoolV, CharV, IntV, ListV, MapV, PairV, Str, Value

M32 = 0xFFFFFFFF


def java_string_hash(s: str) -> int:
    """java.lang.String.hashCode, 32-bit."""
    h = 0
    for c in s:
        h = (31 * h + ord(c)) & M32
    return h


def improve(hcode: int) -> int:
    """The hash scrambler applied by the 2.12 immutable.HashMap."""
    h = (hcode + (~(hcode << 9) & M32)) & M32
    h ^= h >> 14
    h = (h + ((h << 4) & M32)) & M32
    return h ^ (h >> 10)


# -- MurmurHash3 pieces (for tuple/list/map element hashes) -----------------

def _rotl(x: int, n: int) -> int:
    return ((x << n) | (x >> (32 - n))) & M32


def _mix_last(h: int, k: int) -> int:
    k = (k * 0xCC9E2D51) & M32
    k = _rotl(k, 15)
    k = (k * 0x1B873593) & M32
    return h ^ k


def _mix(h: int, k: int) -> int:
    h = _mix_last(h, k)
    h = _rotl(h, 13)
    return (h * 5 + 0xE6546B64) & M32


def _avalanche(h: int) -> int:
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & M32
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & M32
    return h ^ (h >> 16)


def _finalize(h: int, length: int) -> int:
    return _avalanche(h ^ length)


PRODUCT_SEED = 0xCAFEBABE
SEQ_SEED = java_string_hash("Seq")
MAP_SEED = java_string_hash("Map")


def _ordered_hash(hashes: list[int], seed: int) -> int:
    h = seed
    for x in hashes:
        h = _mix(h, x)
    return _finalize(h, len(hashes))


def _unordered_hash(hashes: list[int], seed: int) -> int:
    a = b = n = 0
    c = 1
    for x in hashes:
        a = (a + x) & M32
        b ^= x
        if x != 0:
            c = (c * x) & M32
        n += 1
    h = _mix(seed, a)
    h = _mix(h, b)
    h = _mix_last(h, c)
    return _finalize(h, n)


def element_hash(value: Value) -> int:
    """The JVM `##` of a value, as Scala would compute it for collections."""
    match value:
        case Str(text):
            return java_string_hash(text)
        case IntV(v):
            if -(1 << 31) <= v < (1 << 31):
                return v & M32
            return ((v ^ (v >> 32)) & M32)  # Long.## outside Int range
        case CharV(c):
            return ord(c) & M32
        case BoolV(v):
            return 1231 if v else 1237
        case PairV(a, b):
            h = _mix(PRODUCT_SEED, element_hash(a))
            h = _mix(h, element_hash(b))
            return _finalize(h, 2)
        case ListV(items, _):
            return _ordered_hash([element_hash(x) for x in items], SEQ_SEED)
        case MapV(entries):
            return _unordered_hash([element_hash(PairV(k, v)) for k, v in entries], MAP_SEED)
    raise TypeError(f"unhashable value: {value!r}")


def _trie_rank(key: Value) -> tuple[int, ...]:
    h = improve(element_hash(key))
    # Seven 5-bit chunks cover the full 32-bit hash.
    return tuple((h >> (5 * level)) & 0x1F for level in range(7))


def map_entries_in_order(m: MapV) -> tuple[tuple[Value, Value], ...]:
    """Entries in Scala iteration order: insertion up to 4, hash-trie beyond."""
    if len(m.entries) <= 4:
        return m.entries
    return tuple(sorted(m.entries, key=lambda kv: _trie_rank(kv[0])))
