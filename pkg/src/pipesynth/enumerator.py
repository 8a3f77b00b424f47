"""Bottom-up enumeration of the well-typed pipeline space.

The space is an edge-labeled tree: the root is the empty program and each
edge appends one vocabulary letter whose receiver pattern matches the
parent's result type. Nodes are created breadth-first by length and in
vocabulary order within a level, so node ids double as the deterministic
candidate order. Each node carries the value of its program on every
tracked example input, computed incrementally from the parent; errors
absorb without re-application.

Pruning is monotone marking: Remove cuts every node whose path ends with
the banned sequence (any extension would still contain it), Affix cuts
off-prefix nodes at depths up to the prefix length. Retain and Example
cannot prune subtrees, so candidate iteration re-checks every predicate
exactly; pruning only saves walking doomed regions.

With observational equivalence on, a node whose memo vector duplicates an
earlier node's is folded: it stays retrievable and counted in the static
space, but is never offered as a candidate and never expanded. Folding is
fixed at build time; later examples do not unfold it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .descriptors import MethodDescriptor, Vocabulary, applicable
from .interpreter import apply_letter, evaluate
from .ops import DEFAULT_LIMITS, EvalContext, EvalLimits
from .predicates import (
    Affix,
    Example,
    Predicate,
    Remove,
    Retain,
    contains_contiguous,
)
from .programs import Program
from .render import value_from_wire, value_to_wire
from .values import SemType, Value, type_check

DEFAULT_NODE_CAP = 2_000_000
SPACE_FORMAT_VERSION = 1


class ResourceExceeded(Exception):
    """The enumeration grew past the node cap; fail fast, do not thrash."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"enumeration exceeded {cap} nodes (needed > {count})")
        self.count = count
        self.cap = cap


class SpaceFormatError(ValueError):
    """A persisted-space file that cannot be loaded."""


@dataclass(slots=True)
class EnumNode:
    """One enumerated program; the path of edge tokens spells it out."""

    id: int
    parent: int | None
    token: str | None
    depth: int
    result_type: SemType
    memo: tuple[Value, ...]
    steps: tuple[int, ...]
    children: list[int] = field(default_factory=list)
    pruned: bool = False
    folded: bool = False


@dataclass(frozen=True)
class SpaceStats:
    """Space size and how far the current predicates narrow it."""

    total_wellformed: int
    matching_examples: int
    matching_all: int


class EnumTree:
    """The enumerated space plus per-session pruning state."""

    def __init__(
        self,
        vocab: Vocabulary,
        max_length: int,
        oe: bool,
        example_inputs: list[Value],
        limits: EvalLimits,
        node_cap: int,
    ):
        self.vocab = vocab
        self.max_length = max_length
        self.oe = oe
        self.example_inputs = list(example_inputs)
        self.limits = limits
        self.node_cap = node_cap
        self.nodes: list[EnumNode] = []

    # -- structure helpers --

    def path_tokens(self, node_id: int) -> tuple[str, ...]:
        out = []
        node = self.nodes[node_id]
        while node.token is not None:
            out.append(node.token)
            node = self.nodes[node.parent]  # type: ignore[index]
        return tuple(reversed(out))

    def program_at(self, node_id: int) -> Program:
        return Program(self.path_tokens(node_id))

    def _dead_vector(self) -> list[bool]:
        """Per-node flag: this node or an ancestor is pruned."""
        dead = [False] * len(self.nodes)
        for n in self.nodes:
            dead[n.id] = n.pruned or (n.parent is not None and dead[n.parent])
        return dead


def build_tree(
    v: Vocabulary,
    max_length: int,
    oe: bool = False,
    example_inputs: list[Value] | None = None,
    limits: EvalLimits = DEFAULT_LIMITS,
    node_cap: int = DEFAULT_NODE_CAP,
) -> EnumTree:
    """Enumerate every well-typed program of length up to max_length."""
    if max_length < 0:
        raise ValueError("max_length must be nonnegative")
    inputs = list(example_inputs or [])
    if oe and not inputs:
        raise ValueError("observational equivalence needs at least one example input")
    for i in inputs:
        if not type_check(i, v.input_type):
            raise ValueError("example input does not match the vocabulary input type")

    tree = EnumTree(v, max_length, oe, inputs, limits, node_cap)
    root = EnumNode(
        id=0,
        parent=None,
        token=None,
        depth=0,
        result_type=v.input_type,
        memo=tuple(inputs),
        steps=tuple(0 for _ in inputs),
    )
    tree.nodes.append(root)

    applicable_cache: dict[SemType, list[MethodDescriptor]] = {}
    memo_index: dict[tuple[Value, ...], int] = {root.memo: 0} if oe else {}
    frontier = [0]

    for _depth in range(max_length):
        next_frontier: list[int] = []
        for node_id in frontier:
            node = tree.nodes[node_id]
            letters = applicable_cache.get(node.result_type)
            if letters is None:
                letters = applicable(v, node.result_type)
                applicable_cache[node.result_type] = letters
            for letter in letters:
                if len(tree.nodes) >= node_cap:
                    raise ResourceExceeded(len(tree.nodes), node_cap)
                child = _make_child(tree, node, letter)
                tree.nodes.append(child)
                node.children.append(child.id)
                if oe:
                    prior = memo_index.get(child.memo)
                    if prior is None:
                        memo_index[child.memo] = child.id
                    else:
                        child.folded = True
                if not child.folded:
                    next_frontier.append(child.id)
        frontier = next_frontier
    return tree


def _make_child(tree: EnumTree, parent: EnumNode, letter: MethodDescriptor) -> EnumNode:
    rt = letter.result_type(parent.result_type)
    assert rt is not None
    memo = []
    steps = []
    for i, inp in enumerate(tree.example_inputs):
        ctx = EvalContext(
            original_input=inp, limits=tree.limits, deadline=None, steps=parent.steps[i]
        )
        memo.append(apply_letter(letter, parent.memo[i], ctx, tree.vocab))
        steps.append(ctx.steps)
    return EnumNode(
        id=len(tree.nodes),
        parent=parent.id,
        token=letter.token_id,
        depth=parent.depth + 1,
        result_type=rt,
        memo=tuple(memo),
        steps=tuple(steps),
    )


def prune_with(tree: EnumTree, pred: Predicate) -> EnumTree:
    """Monotone marking for the tree-prunable predicate kinds."""
    match pred:
        case Remove(seq):
            k = len(seq)
            for node in tree.nodes:
                if node.depth >= k and not node.pruned:
                    if _path_suffix(tree, node, seq):
                        node.pruned = True
        case Affix(prefix):
            for node in tree.nodes:
                d = node.depth
                if 1 <= d <= len(prefix) and node.token != prefix[d - 1]:
                    node.pruned = True
        case _:
            raise ValueError("only remove and affix predicates prune the tree")
    return tree


def _path_suffix(tree: EnumTree, node: EnumNode, seq: tuple[str, ...]) -> bool:
    cur = node
    for want in reversed(seq):
        if cur.token != want:
            return False
        cur = tree.nodes[cur.parent]  # type: ignore[index]
    return True


def _example_checker(tree: EnumTree, predicates: list[Predicate]):
    """Per-node closure deciding Example predicates, via memo when possible."""
    memo_slot = {inp: i for i, inp in enumerate(tree.example_inputs)}
    checks: list[tuple[int | None, Example]] = [
        (memo_slot.get(q.input), q) for q in predicates if isinstance(q, Example)
    ]

    def ok(node: EnumNode) -> bool:
        for slot, q in checks:
            if slot is not None:
                if node.memo[slot] != q.output:
                    return False
            else:
                p = tree.program_at(node.id)
                if evaluate(p, q.input, tree.vocab, tree.limits) != q.output:
                    return False
        return True

    return ok


def iterate_candidates(tree: EnumTree, predicates: list[Predicate]):
    """Yield every unpruned, unfolded program satisfying all predicates.

    Order is node-id order: breadth-first by length, vocabulary order
    within a level. Every predicate is re-checked exactly here; pruning
    only short-circuits.
    """
    dead = tree._dead_vector()
    examples_ok = _example_checker(tree, predicates)
    syntactic = [q for q in predicates if not isinstance(q, Example)]
    paths: list[tuple[str, ...]] = [()] * len(tree.nodes)
    for node in tree.nodes:
        if node.parent is not None:
            paths[node.id] = paths[node.parent] + (node.token,)
        if dead[node.id] or node.folded:
            continue
        tokens = paths[node.id]
        if all(_syntactic_ok(tokens, q) for q in syntactic) and examples_ok(node):
            yield Program(tokens)


def _syntactic_ok(tokens: tuple[str, ...], q: Predicate) -> bool:
    match q:
        case Remove(seq):
            return not contains_contiguous(tokens, seq)
        case Retain(seq):
            return contains_contiguous(tokens, seq)
        case Affix(prefix):
            return tokens[: len(prefix)] == prefix
    raise ValueError(f"not a syntactic predicate: {q!r}")


def count_space(tree: EnumTree, predicates: list[Predicate]) -> SpaceStats:
    """Exact traversal counts.

    total_wellformed is the static space size (folded programs included).
    The matching counts are candidate counts, so folded programs are
    excluded; matching_examples ignores pruning because it reflects the
    example predicates alone.
    """
    total = len(tree.nodes)
    dead = tree._dead_vector()
    examples_ok = _example_checker(tree, predicates)
    syntactic = [q for q in predicates if not isinstance(q, Example)]
    matching_examples = 0
    matching_all = 0
    paths: list[tuple[str, ...]] = [()] * len(tree.nodes)
    for node in tree.nodes:
        if node.parent is not None:
            paths[node.id] = paths[node.parent] + (node.token,)
        if node.folded:
            continue
        if not examples_ok(node):
            continue
        matching_examples += 1
        if not dead[node.id] and all(_syntactic_ok(paths[node.id], q) for q in syntactic):
            matching_all += 1
    return SpaceStats(total, matching_examples, matching_all)


def add_example(tree: EnumTree, input: Value) -> None:
    """Extend every node's memo vector with a new example input.

    Parents precede children in id order, so one pass suffices. Folding
    decisions are not revisited.
    """
    if not type_check(input, tree.vocab.input_type):
        raise ValueError("example input does not match the vocabulary input type")
    if input in tree.example_inputs:
        return
    tree.example_inputs.append(input)
    root = tree.nodes[0]
    root.memo = root.memo + (input,)
    root.steps = root.steps + (0,)
    for node in tree.nodes[1:]:
        parent = tree.nodes[node.parent]  # type: ignore[index]
        letter = tree.vocab[node.token]  # type: ignore[index]
        ctx = EvalContext(
            original_input=input,
            limits=tree.limits,
            deadline=None,
            steps=parent.steps[-1],
        )
        node.memo = node.memo + (apply_letter(letter, parent.memo[-1], ctx, tree.vocab),)
        node.steps = node.steps + (ctx.steps,)


# --- persistence -------------------------------------------------------------


def save_space(tree: EnumTree, path: str) -> None:
    """Write the space as line-delimited records (header, then one per node)."""
    with open(path, "w", encoding="utf-8") as f:
        header = {
            "record": "space_header",
            "format_version": SPACE_FORMAT_VERSION,
            "vocabulary": tree.vocab.name,
            "max_length": tree.max_length,
            "oe": tree.oe,
            "node_cap": tree.node_cap,
            "example_inputs": [value_to_wire(i) for i in tree.example_inputs],
            "nodes": len(tree.nodes),
        }
        f.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
        for n in tree.nodes:
            rec = {
                "id": n.id,
                "parent": n.parent,
                "token": n.token,
                "pruned": n.pruned,
                "folded": n.folded,
                "memo": [value_to_wire(x) for x in n.memo],
                "steps": list(n.steps),
            }
            f.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")


def load_space(
    path: str, v: Vocabulary, limits: EvalLimits = DEFAULT_LIMITS
) -> EnumTree:
    """Rebuild a saved space; result types are re-derived from the vocabulary."""
    with open(path, encoding="utf-8") as f:
        try:
            header = json.loads(f.readline())
        except json.JSONDecodeError as e:
            raise SpaceFormatError(f"bad header: {e}") from None
        if header.get("record") != "space_header":
            raise SpaceFormatError("missing space_header record")
        if header.get("format_version") != SPACE_FORMAT_VERSION:
            raise SpaceFormatError(f"unsupported format_version {header.get('format_version')!r}")
        if header.get("vocabulary") != v.name:
            raise SpaceFormatError(
                f"space was built for vocabulary {header.get('vocabulary')!r}, not {v.name!r}"
            )
        inputs = [value_from_wire(w, v.input_type) for w in header.get("example_inputs", [])]
        tree = EnumTree(
            v,
            header.get("max_length", 0),
            header.get("oe", False),
            inputs,
            limits,
            header.get("node_cap", DEFAULT_NODE_CAP),
        )
        for line in f:
            if not line.strip():
                continue
            rec = json.loads(line)
            parent = rec["parent"]
            if parent is None:
                rt: SemType = v.input_type
            else:
                p = tree.nodes[parent]
                rt_opt = v[rec["token"]].result_type(p.result_type)
                if rt_opt is None:
                    raise SpaceFormatError(f"node {rec['id']} is ill-typed for this vocabulary")
                rt = rt_opt
            node = EnumNode(
                id=rec["id"],
                parent=parent,
                token=rec["token"],
                depth=0 if parent is None else tree.nodes[parent].depth + 1,
                result_type=rt,
                memo=tuple(value_from_wire(w) for w in rec["memo"]),
                steps=tuple(rec["steps"]),
                pruned=rec.get("pruned", False),
                folded=rec.get("folded", False),
            )
            if node.id != len(tree.nodes):
                raise SpaceFormatError("node records out of order")
            tree.nodes.append(node)
            if parent is not None:
                tree.nodes[parent].children.append(node.id)
    if len(tree.nodes) != header.get("nodes"):
        raise SpaceFormatError("node count does not match header")
    return tree
