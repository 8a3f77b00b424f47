"""Identity registries and the banned-letter demonstrator.

Examples alone cannot rule a letter out of the space: appending an
invertible pair (or one nullipotent letter) to the target yields a
different program with identical behavior on every input that matters.
This module keeps a registry of such identities, sample-verifies them,
splices them into targets, and partitions program sets by observational
equivalence.

Identity claims are verified on samples drawn from a per-entry context
generator, not proven. A context can be narrower than a type: sliding(2)
followed by min is the identity on strings of length two (one window,
one element), which is exactly the shape of a bigram result.
"""

from __future__ import annotations

import importlib.resources
import random
from dataclasses import dataclass
from pathlib import Path

import yaml

from .descriptors import SchemaError, Vocabulary
from .generators import make_generator
from .interpreter import apply_letter, evaluate
from .ops import DEFAULT_LIMITS, EvalContext, EvalLimits
from .programs import Program, TypingFailure, render_program, type_of
from .tasks import TaskDefinition, load_vocabulary
from .values import ErrorV, SemType, TypeSyntaxError, Value, parse_type


@dataclass(frozen=True)
class IdentityContext:
    """The type, and the input distribution, an identity is claimed on."""

    context_type: SemType
    generator_spec: dict


@dataclass(frozen=True)
class InvertiblePair:
    seq_a: tuple[str, ...]
    seq_b: tuple[str, ...]
    context: IdentityContext

    @property
    def tokens(self) -> tuple[str, ...]:
        return self.seq_a + self.seq_b


@dataclass(frozen=True)
class NullipotentEntry:
    token: str
    context: IdentityContext

    @property
    def tokens(self) -> tuple[str, ...]:
        return (self.token,)


@dataclass(frozen=True)
class EquivRegistry:
    """Shipped identities plus the catalog vocabulary that resolves them."""

    vocabulary: Vocabulary
    invertible_pairs: tuple[InvertiblePair, ...]
    nullipotent_entries: tuple[NullipotentEntry, ...]

    def identities(self) -> list[tuple[tuple[str, ...], IdentityContext]]:
        out: list[tuple[tuple[str, ...], IdentityContext]] = []
        for p in self.invertible_pairs:
            out.append((p.tokens, p.context))
        for n in self.nullipotent_entries:
            out.append((n.tokens, n.context))
        return out


class TypeMismatch(ValueError):
    """The sequence does not map the context type back to itself."""


class NoConstruction(ValueError):
    """No registered identity with the banned letter fits anywhere."""


REGISTRY_FORMAT_VERSION = 1


def _load_context(doc: dict, where: str) -> IdentityContext:
    if not isinstance(doc, dict) or "type" not in doc or "generator" not in doc:
        raise SchemaError(where, "must be a mapping with type and generator")
    try:
        t = parse_type(doc["type"])
    except TypeSyntaxError as e:
        raise SchemaError(f"{where}.type", str(e)) from None
    make_generator(doc["generator"])
    return IdentityContext(t, doc["generator"])


def load_registry(path: str | Path | None = None) -> EquivRegistry:
    if path is None:
        path = Path(str(importlib.resources.files("pipesynth") / "data" / "registry.yaml"))
    with open(path, encoding="utf-8") as f:
        doc = yaml.safe_load(f)
    if not isinstance(doc, dict) or doc.get("format_version") != REGISTRY_FORMAT_VERSION:
        raise SchemaError(str(path), f"format_version must be {REGISTRY_FORMAT_VERSION}")
    vocab = load_vocabulary(doc.get("vocabulary"), f"{path}.vocabulary")

    pairs = []
    for i, entry in enumerate(doc.get("invertible_pairs", []) or []):
        where = f"{path}.invertible_pairs[{i}]"
        seq_a = tuple(entry.get("seq_a", ()))
        seq_b = tuple(entry.get("seq_b", ()))
        if not seq_a or not seq_b:
            raise SchemaError(where, "needs nonempty seq_a and seq_b")
        for tok in seq_a + seq_b:
            if tok not in vocab:
                raise SchemaError(where, f"unknown token {tok!r}")
        pairs.append(InvertiblePair(seq_a, seq_b, _load_context(entry.get("context"), where)))

    nulls = []
    for i, entry in enumerate(doc.get("nullipotent_entries", []) or []):
        where = f"{path}.nullipotent_entries[{i}]"
        tok = entry.get("token")
        if not isinstance(tok, str) or tok not in vocab:
            raise SchemaError(where, f"unknown token {tok!r}")
        nulls.append(NullipotentEntry(tok, _load_context(entry.get("context"), where)))

    return EquivRegistry(vocab, tuple(pairs), tuple(nulls))


def _fold_type(start: SemType, tokens: tuple[str, ...], v: Vocabulary) -> SemType | None:
    cur = start
    for tok in tokens:
        nxt = v[tok].result_type(cur)
        if nxt is None:
            return None
        cur = nxt
    return cur


def apply_sequence(
    tokens: tuple[str, ...], x: Value, v: Vocabulary, lim: EvalLimits = DEFAULT_LIMITS
) -> Value:
    """Apply letters to a bare value (not necessarily the input type)."""
    ctx = EvalContext(original_input=x, limits=lim, deadline=None)
    cur = x
    for tok in tokens:
        cur = apply_letter(v[tok], cur, ctx, v)
        if isinstance(cur, ErrorV):
            return cur
    return cur


def verify_identity(
    seq: tuple[str, ...],
    ctx_type: SemType,
    samples: list[Value],
    v: Vocabulary,
    lim: EvalLimits = DEFAULT_LIMITS,
) -> bool:
    """True iff seq maps every sample back to itself."""
    if _fold_type(ctx_type, seq, v) != ctx_type:
        raise TypeMismatch(f"{seq} does not map {ctx_type} to itself")
    return all(apply_sequence(seq, x, v, lim) == x for x in samples)


def verify_registry(
    reg: EquivRegistry, n_samples: int = 100, seed: int = 0
) -> list[dict]:
    """Sample-check every entry against the registry's own catalog."""
    results = []
    for tokens, context in reg.identities():
        rng = random.Random(seed)
        gen = make_generator(context.generator_spec)
        samples = [gen(rng) for _ in range(n_samples)]
        try:
            ok = verify_identity(tokens, context.context_type, samples, reg.vocabulary)
        except TypeMismatch as e:
            results.append({"tokens": list(tokens), "ok": False, "error": str(e)})
            continue
        results.append({"tokens": list(tokens), "ok": ok})
    return results


def make_equivalent_with(
    target: Program,
    banned: str,
    reg: EquivRegistry,
    v: Vocabulary,
    lim: EvalLimits = DEFAULT_LIMITS,
) -> Program:
    """Splice an identity containing the banned letter into the target.

    Tries the end of the pipeline first, then earlier positions; the
    first type-compatible splice wins. All spliced tokens must exist in
    the working vocabulary, not just the registry catalog.
    """
    candidates = [
        (tokens, context)
        for tokens, context in reg.identities()
        if banned in tokens and all(t in v for t in tokens)
    ]
    if not candidates:
        raise NoConstruction(f"no registered identity uses {banned!r}")
    prefix_types: list[SemType] = [v.input_type]
    cur: SemType | None = v.input_type
    for tok in target.tokens:
        cur = v[tok].result_type(cur)  # target is well-typed by precondition
        if cur is None:
            raise TypeMismatch("target program is ill-typed")
        prefix_types.append(cur)
    for k in range(len(target.tokens), -1, -1):
        for tokens, context in candidates:
            if prefix_types[k] != context.context_type:
                continue
            if _fold_type(prefix_types[k], tokens, v) != prefix_types[k]:
                continue
            spliced = Program(target.tokens[:k] + tokens + target.tokens[k:])
            if not isinstance(type_of(spliced, v), TypingFailure):
                return spliced
    raise NoConstruction(f"no identity with {banned!r} fits the target's types")


def observational_partition(
    programs: list[Program],
    inputs: list[Value],
    v: Vocabulary,
    lim: EvalLimits = DEFAULT_LIMITS,
) -> list[list[Program]]:
    """Group programs by their output vectors; errors compare by kind."""
    classes: dict[tuple, list[Program]] = {}
    for p in programs:
        key = []
        for i in inputs:
            out = evaluate(p, i, v, lim)
            key.append(("error", out.kind) if isinstance(out, ErrorV) else ("value", out))
        classes.setdefault(tuple(key), []).append(p)
    return list(classes.values())


def claim1_report(
    task: TaskDefinition,
    banned: str | None = None,
    reg: EquivRegistry | None = None,
    n_sets: int = 50,
    per_set: int = 5,
    n_agree: int = 100,
    length_slack: int = 2,
    seed: int = 0,
    lim: EvalLimits = DEFAULT_LIMITS,
) -> dict:
    """Exhibit a banned-letter program no example set can exclude.

    For each sampled example set consistent with the target, the witness
    (target plus a spliced identity) must satisfy every example; being
    well-typed and within the raised length bound, it sits in the
    filtered space while containing the banned letter.
    """
    if task.target is None:
        raise ValueError(f"task {task.task_id} has no target")
    banned = banned or task.banned_letter
    if banned is None:
        raise ValueError(f"task {task.task_id} names no banned letter")
    reg = reg or load_registry()
    if task.generator_spec is None:
        raise ValueError(f"task {task.task_id} has no input generator")

    witness = make_equivalent_with(task.target, banned, reg, task.vocabulary, lim)
    bound = len(task.target) + length_slack
    rng = random.Random(seed)
    gen = make_generator(task.generator_spec)

    def draw_consistent() -> tuple[Value, Value]:
        for _ in range(1000):
            x = gen(rng)
            out = evaluate(task.target, x, task.vocabulary, lim)
            if not isinstance(out, ErrorV):
                return x, out
        raise ValueError("generator cannot produce target-defined inputs")

    agreement_failures = 0
    for _ in range(n_agree):
        x, want = draw_consistent()
        if evaluate(witness, x, task.vocabulary, lim) != want:
            agreement_failures += 1

    set_failures = 0
    sets = []
    for _ in range(n_sets):
        examples = [draw_consistent() for _ in range(per_set)]
        ok = all(
            evaluate(witness, i, task.vocabulary, lim) == o for i, o in examples
        )
        sets.append(ok)
        if not ok:
            set_failures += 1

    return {
        "task_id": task.task_id,
        "banned": banned,
        "witness": render_program(witness, task.vocabulary),
        "witness_tokens": list(witness.tokens),
        "witness_length": len(witness),
        "length_bound": bound,
        "within_bound": len(witness) <= bound,
        "sets_sampled": n_sets,
        "examples_per_set": per_set,
        "set_failures": set_failures,
        "agreement_inputs": n_agree,
        "agreement_failures": agreement_failures,
        "ok": set_failures == 0
        and agreement_failures == 0
        and len(witness) <= bound,
    }
