"""Rendering and literal parsing: round-trips, truncation, display order."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pipesynth.render import (
    LiteralError,
    parse_value_literal,
    render_full,
    render_value,
    value_from_wire,
    value_to_wire,
)
from pipesynth.scala_order import map_entries_in_order
from pipesynth.values import (
    BoolV,
    CharV,
    ErrorV,
    IntV,
    ListV,
    MapV,
    PairV,
    Str,
    parse_type,
)


def test_render_full_forms():
    assert render_full(Str("ab")) == '"ab"'
    assert render_full(IntV(-3)) == "-3"
    assert render_full(CharV("a")) == "a"
    assert render_full(BoolV(True)) == "true"
    assert render_full(ListV((Str("a"), Str("b")))) == 'List("a","b")'
    assert render_full(PairV(Str("bd"), IntV(4))) == '("bd",4)'
    assert render_full(MapV(((Str("a"), IntV(1)),))) == 'Map("a"->1)'
    assert render_full(ListV(())) == "List()"
    assert render_full(ErrorV("TypeError", "boom")) == "TypeError: boom"


def test_render_escapes_control_characters():
    assert render_full(Str("a\nb")) == '"a\\nb"'
    assert render_full(Str('say "hi"')) == '"say \\"hi\\""'
    assert render_full(Str("a\\b")) == '"a\\\\b"'


def test_small_maps_display_in_insertion_order():
    m = MapV(((Str("z"), IntV(1)), (Str("a"), IntV(2)), (Str("m"), IntV(3))))
    assert [k.text for k, _ in map_entries_in_order(m)] == ["z", "a", "m"]


def test_large_maps_display_in_hash_order():
    # Five or more entries switch to the hash-trie iteration order, which
    # is what the walkthrough listing shows ("bf" before "ab").
    keys = ["ab", "bd", "df", "fi", "ib", "bf", "fc"]
    m = MapV(tuple((Str(k), IntV(i)) for i, k in enumerate(keys)))
    shown = [k.text for k, _ in map_entries_in_order(m)]
    assert sorted(shown) == sorted(keys)
    assert shown != keys


def test_truncation_cuts_at_element_boundaries():
    v = ListV(tuple(IntV(i) for i in range(100)))
    r = render_value(v, max_chars=20)
    assert r.truncated
    assert len(r.text) <= 20
    assert r.text.startswith("List(") and r.text.endswith(",...)")
    # every kept element is complete
    body = r.text[len("List("):-len(",...)")]
    assert body == ",".join(str(i) for i in range(len(body.split(","))))


def test_truncation_leaves_short_values_alone():
    r = render_value(ListV((IntV(1), IntV(2))))
    assert not r.truncated
    assert r.text == "List(1,2)"


def test_truncation_atom_fallback():
    r = render_value(Str("x" * 200), max_chars=10)
    assert r.truncated
    assert len(r.text) == 10
    assert r.text.endswith("...")


def test_min_width_is_enforced():
    with pytest.raises(ValueError):
        render_value(IntV(1), max_chars=4)


# digit chars render bare ("0") and parse back as ints without a type to
# steer them, so the untyped round-trip property sticks to letter chars;
# the digit case is pinned separately below.
scalars = st.one_of(
    st.text(max_size=6).map(Str),
    st.integers(min_value=-(2**63), max_value=2**63 - 1).map(IntV),
    st.sampled_from("abcxyz").map(CharV),
    st.booleans().map(BoolV),
)
values = st.recursive(
    scalars,
    lambda inner: st.one_of(
        st.lists(inner, max_size=4).map(lambda xs: ListV(tuple(xs))),
        st.tuples(inner, inner).map(lambda p: PairV(*p)),
        st.lists(st.tuples(inner, inner), max_size=3).map(
            lambda es: MapV(tuple(es))
        ),
    ),
    max_leaves=8,
)


@given(values)
def test_literal_round_trip(v):
    text = render_full(v)
    if isinstance(v, CharV):
        assert parse_value_literal(text, parse_type("Char")) == v
    else:
        assert parse_value_literal(text) == v


def test_lone_digit_parses_by_expected_type():
    assert parse_value_literal("7") == IntV(7)
    assert parse_value_literal("7", parse_type("Char")) == CharV("7")
    assert parse_value_literal("a") == CharV("a")
    assert parse_value_literal('"a"') == Str("a")


def test_parse_rejects_malformed_literals():
    for bad in ["", "List(", '"unterminated', "(1,2", "Map(1)", "List(1,)"]:
        with pytest.raises(LiteralError):
            parse_value_literal(bad)


def test_wire_values_round_trip():
    for v in [Str("a\nb"), IntV(-1), ListV((PairV(Str("k"), IntV(2)),))]:
        assert value_from_wire(value_to_wire(v)) == v
    err = ErrorV("RuntimeError", "empty.head")
    w = value_to_wire(err)
    assert w == {"error": "RuntimeError", "message": "empty.head"}
    assert value_from_wire(w) == err
