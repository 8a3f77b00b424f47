"""Task corpus: vocabulary documents, examples, targets, input generators.

A task file is one YAML document, self-contained: the vocabulary (letters
with receiver patterns and return rules, plus the lambda catalog), the
seed examples, the reference target program, an input-generator spec, and
presentation metadata. The loader validates eagerly so a malformed file
fails at startup, not mid-session.

Letter schema: {token_id, display?, receiver, returns, builtin, args?,
lambda?}. The receiver is a '|'-separated union of type patterns with at
most one type variable each; returns is "Self" (the matched receiver
type), one rule per alternative, or a single rule broadcast to all.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path

import yaml

from .descriptors import (
    Alternative,
    DuplicateTokenError,
    MethodDescriptor,
    SchemaError,
    UnknownBuiltinError,
    Vocabulary,
    parse_receiver_pattern,
    parse_return_rule,
)
from .generators import GeneratorSpecError, make_generator
from .interpreter import evaluate
from .ops import BUILTINS, LAMBDAS
from .programs import Program, TypingFailure, type_of
from .render import value_from_wire
from .values import TypeSyntaxError, Value, parse_type, type_check

TASK_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TaskDefinition:
    """One synthesis task: vocabulary, seed examples, reference target."""

    task_id: str
    name: str
    description: str
    vocabulary: Vocabulary
    initial_examples: tuple[tuple[Value, Value], ...]
    target: Program | None
    max_length: int
    study_task: bool = False
    banned_letter: str | None = None
    generator_spec: dict | None = None


def load_vocabulary(doc: dict, where: str = "vocabulary") -> Vocabulary:
    if not isinstance(doc, dict):
        raise SchemaError(where, "must be a mapping")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{where}.name", "must be a nonempty string")
    try:
        input_type = parse_type(_req_str(doc, "input_type", where))
    except TypeSyntaxError as e:
        raise SchemaError(f"{where}.input_type", str(e)) from None

    lambdas: dict[str, str] = {}
    for i, entry in enumerate(doc.get("lambdas", []) or []):
        path = f"{where}.lambdas[{i}]"
        if not isinstance(entry, dict) or "id" not in entry or "builtin" not in entry:
            raise SchemaError(path, "must be a mapping with id and builtin")
        impl = entry["builtin"]
        if impl not in LAMBDAS:
            raise SchemaError(f"{path}.builtin", f"unknown lambda implementation {impl!r}")
        if entry["id"] in lambdas:
            raise SchemaError(f"{path}.id", f"duplicate lambda id {entry['id']!r}")
        lambdas[entry["id"]] = impl

    raw_letters = doc.get("letters")
    if not isinstance(raw_letters, list) or not raw_letters:
        raise SchemaError(f"{where}.letters", "must be a nonempty list")
    letters = []
    for i, entry in enumerate(raw_letters):
        letters.append(_load_letter(entry, lambdas, f"{where}.letters[{i}]"))
    return Vocabulary(name, input_type, tuple(letters), lambdas)


def _req_str(doc: dict, key: str, where: str) -> str:
    val = doc.get(key)
    if not isinstance(val, str) or not val:
        raise SchemaError(f"{where}.{key}", "must be a nonempty string")
    return val


def _load_letter(entry: dict, lambdas: dict[str, str], path: str) -> MethodDescriptor:
    if not isinstance(entry, dict):
        raise SchemaError(path, "must be a mapping")
    token_id = _req_str(entry, "token_id", path)
    builtin_name = _req_str(entry, "builtin", path)
    builtin = BUILTINS.get(builtin_name)
    if builtin is None:
        raise UnknownBuiltinError(builtin_name)

    try:
        receivers = parse_receiver_pattern(_req_str(entry, "receiver", path))
        returns = parse_return_rule(_req_str(entry, "returns", path), len(receivers))
    except TypeSyntaxError as e:
        raise SchemaError(path, str(e)) from None

    args = entry.get("args", []) or []
    if not isinstance(args, list):
        raise SchemaError(f"{path}.args", "must be a list")
    if len(args) != len(builtin.arg_kinds):
        raise SchemaError(
            f"{path}.args",
            f"{builtin_name} takes {len(builtin.arg_kinds)} bound args, got {len(args)}",
        )
    for arg, kind in zip(args, builtin.arg_kinds):
        if kind == "int" and not isinstance(arg, int):
            raise SchemaError(f"{path}.args", f"expected an int, got {arg!r}")
        if kind == "str" and not isinstance(arg, str):
            raise SchemaError(f"{path}.args", f"expected a string, got {arg!r}")

    lambda_id = entry.get("lambda")
    if builtin.needs_lambda and lambda_id is None:
        raise SchemaError(path, f"{builtin_name} needs a lambda")
    if not builtin.needs_lambda and lambda_id is not None:
        raise SchemaError(path, f"{builtin_name} takes no lambda")
    if lambda_id is not None and lambda_id not in lambdas:
        raise SchemaError(path, f"lambda id {lambda_id!r} is not in the catalog")

    return MethodDescriptor(
        token_id=token_id,
        builtin_op=builtin_name,
        alternatives=tuple(Alternative(r, ret) for r, ret in zip(receivers, returns)),
        bound_args=tuple(args),
        lambda_id=lambda_id,
        display_text=entry.get("display", token_id),
    )


def load_task(doc: dict, where: str = "task") -> TaskDefinition:
    if not isinstance(doc, dict):
        raise SchemaError(where, "must be a mapping")
    if doc.get("format_version") != TASK_FORMAT_VERSION:
        raise SchemaError(f"{where}.format_version", f"must be {TASK_FORMAT_VERSION}")
    task_id = _req_str(doc, "task_id", where)
    vocab = load_vocabulary(doc.get("vocabulary"), f"{where}.vocabulary")

    examples = []
    raw_examples = doc.get("initial_examples")
    if not isinstance(raw_examples, list) or not raw_examples:
        raise SchemaError(f"{where}.initial_examples", "must be a nonempty list")
    for i, entry in enumerate(raw_examples):
        path = f"{where}.initial_examples[{i}]"
        if not isinstance(entry, dict) or "input" not in entry or "output" not in entry:
            raise SchemaError(path, "must be a mapping with input and output")
        try:
            inp = value_from_wire(entry["input"], vocab.input_type)
            out = value_from_wire(entry["output"])
        except ValueError as e:
            raise SchemaError(path, str(e)) from None
        if not type_check(inp, vocab.input_type):
            raise SchemaError(f"{path}.input", "does not match the vocabulary input type")
        examples.append((inp, out))

    target = None
    raw_target = doc.get("target")
    if raw_target is not None:
        if not isinstance(raw_target, list) or not all(isinstance(t, str) for t in raw_target):
            raise SchemaError(f"{where}.target", "must be a list of token ids")
        for tok in raw_target:
            if tok not in vocab:
                raise SchemaError(f"{where}.target", f"unknown token {tok!r}")
        target = Program(tuple(raw_target))
        if isinstance(type_of(target, vocab), TypingFailure):
            raise SchemaError(f"{where}.target", "target program is ill-typed")

    max_length = doc.get("max_length", len(target) if target else 0)
    if not isinstance(max_length, int) or max_length < 0:
        raise SchemaError(f"{where}.max_length", "must be a nonnegative int")

    banned = doc.get("banned_letter")
    if banned is not None and banned not in vocab:
        raise SchemaError(f"{where}.banned_letter", f"unknown token {banned!r}")

    gen_spec = doc.get("generator")
    if gen_spec is not None:
        try:
            make_generator(gen_spec)
        except GeneratorSpecError as e:
            raise SchemaError(f"{where}.generator", str(e)) from None

    return TaskDefinition(
        task_id=task_id,
        name=doc.get("name", task_id),
        description=doc.get("description", ""),
        vocabulary=vocab,
        initial_examples=tuple(examples),
        target=target,
        max_length=max_length,
        study_task=bool(doc.get("study_task", False)),
        banned_letter=banned,
        generator_spec=gen_spec,
    )


def load_task_file(path: str | Path) -> TaskDefinition:
    with open(path, encoding="utf-8") as f:
        doc = yaml.safe_load(f)
    return load_task(doc, where=str(path))


def _corpus_dir() -> Path:
    return Path(str(importlib.resources.files("pipesynth") / "data" / "tasks"))


def list_task_ids(tasks_dir: str | Path | None = None) -> list[str]:
    base = Path(tasks_dir) if tasks_dir is not None else _corpus_dir()
    return sorted(p.stem for p in base.glob("*.yaml"))


def load_task_by_id(task_id: str, tasks_dir: str | Path | None = None) -> TaskDefinition:
    base = Path(tasks_dir) if tasks_dir is not None else _corpus_dir()
    path = base / f"{task_id}.yaml"
    if not path.exists():
        raise KeyError(task_id)
    task = load_task_file(path)
    if task.task_id != task_id:
        raise SchemaError(str(path), f"task_id {task.task_id!r} does not match filename")
    return task


def check_task(task: TaskDefinition) -> list[str]:
    """Deep validation: target vs examples, generator type agreement."""
    problems = []
    if task.target is not None:
        for i, (inp, out) in enumerate(task.initial_examples):
            got = evaluate(task.target, inp, task.vocabulary)
            if got != out:
                problems.append(
                    f"target disagrees with initial example {i}: got {got!r}, want {out!r}"
                )
        if task.max_length < len(task.target):
            problems.append("max_length is smaller than the target length")
    if task.generator_spec is not None:
        import random

        gen = make_generator(task.generator_spec)
        rng = random.Random(0)
        for _ in range(20):
            val = gen(rng)
            if not type_check(val, task.vocabulary.input_type):
                problems.append("generator produced a value outside the input type")
                break
    return problems
