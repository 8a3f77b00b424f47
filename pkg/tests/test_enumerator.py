"""Space construction, memo correctness, folding, pruning, persistence."""

import itertools
import random

import pytest

from pipesynth.enumerator import (
    ResourceExceeded,
    SpaceFormatError,
    add_example,
    build_tree,
    count_space,
    iterate_candidates,
    load_space,
    prune_with,
    save_space,
)
from pipesynth.interpreter import evaluate
from pipesynth.predicates import Affix, Example, Remove, Retain
from pipesynth.programs import Program, TypingFailure, type_of
from pipesynth.values import Str


def all_programs(vocab, max_length):
    toks = [l.token_id for l in vocab.letters]
    return [
        Program(c)
        for n in range(max_length + 1)
        for c in itertools.product(toks, repeat=n)
    ]


def test_wellformed_count_matches_hand_formula(toy_vocab):
    # 5 Str->Str letters: sum of 5^k for k = 0..3
    tree = build_tree(toy_vocab, 3)
    assert count_space(tree, []).total_wellformed == 156


def test_typed_vocabulary_prunes_illtyped_branches(freqbigram):
    # the full corpus vocabulary is type-directed, so the space is far
    # smaller than |V|^len; cross-check against the standalone type checker
    tree = build_tree(freqbigram.vocabulary, 2)
    want = sum(
        1
        for p in all_programs(freqbigram.vocabulary, 2)
        if not isinstance(type_of(p, freqbigram.vocabulary), TypingFailure)
    )
    assert count_space(tree, []).total_wellformed == want
    assert want < sum(19**k for k in range(3))


def test_enumeration_order_is_length_then_vocab_order(toy_vocab):
    tree = build_tree(toy_vocab, 2)
    seen = [p.tokens for p in iterate_candidates(tree, [])]
    assert seen[0] == ()
    assert seen[1:6] == [(t,) for t in
                         ("reverse", "sorted", "tail", "take(2)", "distinct")]
    assert seen[6] == ("reverse", "reverse")
    assert len(seen) == 31


def test_memoized_values_match_direct_evaluation(build_toy_tree, toy_vocab):
    x = Str("bdca")
    tree = build_toy_tree(3, oe=True, example_inputs=[x])
    for node in tree.nodes:
        p = tree.program_at(node.id)
        assert node.memo[0] == evaluate(p, x, toy_vocab)


def test_observational_folding_collapses_duplicates(build_toy_tree):
    x = Str("ab")
    tree = build_toy_tree(2, oe=True, example_inputs=[x])
    # on "ab" sorted/take(2)/distinct are identities, so they fold into the
    # empty program; only genuinely distinct behaviors survive
    survivors = [p.tokens for p in iterate_candidates(tree, [])]
    assert survivors == [
        (),
        ("reverse",),
        ("tail",),
        ("reverse", "tail"),
        ("tail", "tail"),
    ]
    assert sum(1 for n in tree.nodes if n.folded) == 11


def test_folded_nodes_count_but_their_subtrees_never_exist(build_toy_tree):
    x = Str("ab")
    plain = build_toy_tree(2)
    folded = build_toy_tree(2, oe=True, example_inputs=[x])
    assert count_space(plain, []).total_wellformed == 31
    # root + 5 children + 5 grandchildren under each of the 2 survivors
    assert count_space(folded, []).total_wellformed == 16
    assert sum(1 for _ in iterate_candidates(folded, [])) == 5


def test_oe_requires_inputs(toy_vocab):
    with pytest.raises(ValueError):
        build_tree(toy_vocab, 2, oe=True)


def test_node_cap_trips(toy_vocab):
    with pytest.raises(ResourceExceeded):
        build_tree(toy_vocab, 3, node_cap=100)


def test_filter_semantics_over_full_space(build_toy_tree, toy_vocab):
    tree = build_toy_tree(3)
    preds = [
        Remove(("tail", "tail")),
        Retain(("sorted",)),
        Example(Str("cab"), Str("abc")),
    ]
    got = {p.tokens for p in iterate_candidates(tree, preds)}
    want = {
        p.tokens
        for p in all_programs(toy_vocab, 3)
        if not any(
            p.tokens[i:i + 2] == ("tail", "tail")
            for i in range(len(p.tokens) - 1)
        )
        and "sorted" in p.tokens
        and evaluate(p, Str("cab"), toy_vocab) == Str("abc")
    }
    assert got == want


def test_prune_with_equals_filter_from_scratch(build_toy_tree, toy_tree_pristine):
    rng = random.Random(2024)
    toks = ("reverse", "sorted", "tail", "take(2)", "distinct")
    for _ in range(25):
        preds = []
        for _ in range(rng.randint(1, 3)):
            kind = rng.choice(("remove", "affix"))
            n = rng.randint(1, 2)
            seq = tuple(rng.choice(toks) for _ in range(n))
            preds.append(Remove(seq) if kind == "remove" else Affix(seq))
        pruned = build_toy_tree(5)
        for q in preds:
            pruned = prune_with(pruned, q)
        got = [p.tokens for p in iterate_candidates(pruned, preds)]
        want = [p.tokens for p in iterate_candidates(toy_tree_pristine, preds)]
        assert got == want


def test_count_space_layers(build_toy_tree):
    tree = build_toy_tree(2)
    preds = [Example(Str("ba"), Str("ab"))]
    stats = count_space(tree, preds)
    assert stats.total_wellformed == 31
    assert stats.matching_examples == stats.matching_all
    pruned = prune_with(tree, Remove(("reverse",)))
    stats2 = count_space(pruned, preds + [Remove(("reverse",))])
    # pruning never changes the well-formed total
    assert stats2.total_wellformed == 31
    assert stats2.matching_all < stats.matching_all


def test_add_example_extends_memos_like_a_fresh_build(build_toy_tree, toy_vocab):
    x1, x2 = Str("ab"), Str("ba")
    incremental = build_toy_tree(2, example_inputs=[x1])
    add_example(incremental, x2)
    fresh = build_toy_tree(2, example_inputs=[x1, x2])
    for a, b in zip(incremental.nodes, fresh.nodes):
        assert a.memo == b.memo
    # downstream example filtering sees the new memo
    q = Example(x2, Str("ab"))
    got = {p.tokens for p in iterate_candidates(incremental, [q])}
    want = {p.tokens for p in iterate_candidates(fresh, [q])}
    assert got == want and ("sorted",) in got


def test_add_example_never_revisits_folds(build_toy_tree, toy_vocab):
    x1, x2 = Str("ab"), Str("ba")
    tree = build_toy_tree(2, oe=True, example_inputs=[x1])
    folded_before = [n.id for n in tree.nodes if n.folded]
    add_example(tree, x2)
    assert [n.id for n in tree.nodes if n.folded] == folded_before
    for node in tree.nodes:
        p = tree.program_at(node.id)
        assert node.memo[1] == evaluate(p, x2, toy_vocab)
    # duplicate input is a no-op
    n_inputs = len(tree.example_inputs)
    add_example(tree, x2)
    assert len(tree.example_inputs) == n_inputs


def test_save_load_round_trip(tmp_path, build_toy_tree, toy_vocab):
    tree = build_toy_tree(2, oe=True, example_inputs=[Str("ba")])
    path = str(tmp_path / "space.jsonl")
    save_space(tree, path)
    back = load_space(path, toy_vocab)
    assert [p.tokens for p in iterate_candidates(back, [])] == [
        p.tokens for p in iterate_candidates(tree, [])
    ]
    for a, b in zip(tree.nodes, back.nodes):
        assert a.memo == b.memo and a.folded == b.folded


def test_load_rejects_wrong_vocabulary(tmp_path, build_toy_tree, freqbigram):
    tree = build_toy_tree(2)
    path = str(tmp_path / "space.jsonl")
    save_space(tree, path)
    with pytest.raises(SpaceFormatError):
        load_space(path, freqbigram.vocabulary)


def test_load_rejects_garbage(tmp_path, toy_vocab):
    path = tmp_path / "junk.jsonl"
    path.write_text('{"not": "a header"}\n')
    with pytest.raises(SpaceFormatError):
        load_space(str(path), toy_vocab)
