"""Command line entry points.

validate     check task files: targets vs seed examples, lengths, generators
stats        enumerate each task's space and print the counts
run-script   drive a scripted session and compare the accepted program
replay       re-run a recorded session log and diff the transcripts
claim1       splice a banned letter into a target and test indistinguishability
serve        run the HTTP service
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from .enumerator import ResourceExceeded
from .equivalence import claim1_report, load_registry, verify_registry
from .ops import DEFAULT_LIMITS, EvalLimits
from .session import (
    SessionConfig,
    parse_script,
    replay_log,
    run_script,
    transcript_lines,
)
from .tasks import check_task, list_task_ids, load_task_by_id


def _parse_limits(text: str | None) -> EvalLimits:
    if not text:
        return DEFAULT_LIMITS
    parts = text.split(",")
    if len(parts) != 3:
        raise click.BadParameter("expected steps,cells,seconds")
    return EvalLimits(
        max_steps=int(parts[0]), max_value_cells=int(parts[1]), timeout=float(parts[2])
    )


def _parse_salt(text: str | None) -> int | None:
    if text is None:
        return None
    return int(text, 16) if any(c in text.lower() for c in "abcdefx") else int(text)


tasks_dir_option = click.option(
    "--tasks-dir", type=click.Path(exists=True, file_okay=False), default=None,
    help="Directory of task files (defaults to the packaged corpus).",
)


@click.group()
def main() -> None:
    """Interactive synthesis of linear pipeline programs."""


@main.command()
@tasks_dir_option
@click.argument("task_ids", nargs=-1)
def validate(tasks_dir: str | None, task_ids: tuple[str, ...]) -> None:
    """Load tasks and check targets, lengths, and input generators."""
    ids = list(task_ids) or list_task_ids(tasks_dir)
    failed = 0
    for task_id in ids:
        try:
            task = load_task_by_id(task_id, tasks_dir)
            problems = check_task(task)
        except Exception as e:  # noqa: BLE001 - every load failure is a report line
            click.echo(f"{task_id}: ERROR {e}")
            failed += 1
            continue
        if problems:
            failed += 1
            for p in problems:
                click.echo(f"{task_id}: FAIL {p}")
        else:
            click.echo(f"{task_id}: ok")
    sys.exit(1 if failed else 0)


@main.command()
@tasks_dir_option
@click.option("--max-length", type=int, default=None, help="Override the task's bound.")
@click.option("--oe", is_flag=True, help="Fold observationally equivalent programs.")
@click.option("--limits", default=None, help="steps,cells,seconds per evaluation.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write JSON here.")
@click.argument("task_ids", nargs=-1)
def stats(
    tasks_dir: str | None,
    max_length: int | None,
    oe: bool,
    limits: str | None,
    out: str | None,
    task_ids: tuple[str, ...],
) -> None:
    """Enumerate each task's space and print size and match counts."""
    from .enumerator import build_tree, count_space
    from .predicates import Example

    lim = _parse_limits(limits)
    ids = list(task_ids) or list_task_ids(tasks_dir)
    rows = []
    for task_id in ids:
        task = load_task_by_id(task_id, tasks_dir)
        bound = max_length if max_length is not None else task.max_length
        t0 = time.monotonic()
        try:
            tree = build_tree(
                task.vocabulary, bound, oe,
                [i for i, _ in task.initial_examples], lim,
            )
        except ResourceExceeded as e:
            click.echo(f"{task_id}: space over cap at length {bound} ({e})")
            rows.append({"task_id": task_id, "max_length": bound, "error": str(e)})
            continue
        preds = [Example(i, o) for i, o in task.initial_examples]
        counts = count_space(tree, preds)
        dt = time.monotonic() - t0
        row = {
            "task_id": task_id,
            "letters": len(task.vocabulary.letters),
            "max_length": bound,
            "oe": oe,
            "total_wellformed": counts.total_wellformed,
            "matching_examples": counts.matching_examples,
            "seconds": round(dt, 3),
        }
        rows.append(row)
        click.echo(
            f"{task_id}: |V|={row['letters']} len<={bound} "
            f"total={counts.total_wellformed} matching={counts.matching_examples} "
            f"({dt:.2f}s)"
        )
    if out:
        Path(out).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")


@main.command("run-script")
@tasks_dir_option
@click.option("--salt", default=None, help="Override the script header salt (hex ok).")
@click.option("--max-length", type=int, default=None)
@click.option("--oe", is_flag=True, default=None)
@click.option("--limits", default=None, help="steps,cells,seconds per evaluation.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the run transcript here.")
@click.argument("script_file", type=click.Path(exists=True, dir_okay=False))
def run_script_cmd(
    tasks_dir: str | None,
    salt: str | None,
    max_length: int | None,
    oe: bool | None,
    limits: str | None,
    out: str | None,
    script_file: str,
) -> None:
    """Drive a session from a script file (JSONL).

    Exit 0 when the accepted program matches the script's expectation,
    1 on mismatch, 2 when the script ends with the session still open.
    """
    lines = Path(script_file).read_text(encoding="utf-8").splitlines()
    records = parse_script(lines)
    header = records[0].get("payload", {})
    task = load_task_by_id(header["task_id"], tasks_dir)
    config = None
    if salt is not None or max_length is not None or oe is not None or limits is not None:
        hdr_salt = header.get("salt")
        config = SessionConfig(
            salt=_parse_salt(salt) if salt is not None
            else (int(hdr_salt, 16) if isinstance(hdr_salt, str) else hdr_salt),
            max_length=max_length if max_length is not None else header.get("max_length"),
            oe=oe if oe is not None else header.get("oe", False),
            allow_reject=header.get("allow_reject", False),
            limits=_parse_limits(limits),
        )
    outcome = run_script(task, records, config)
    transcript = "\n".join(transcript_lines(outcome.state)) + "\n"
    if out:
        Path(out).write_text(transcript, encoding="utf-8")
    else:
        click.echo(transcript, nl=False)
    if outcome.incomplete:
        click.echo("incomplete: script ended with the session still open", err=True)
        sys.exit(2)
    if outcome.mismatch:
        click.echo(
            f"mismatch: accepted program differs from expectation\n"
            f"  expected: {outcome.expected}",
            err=True,
        )
        sys.exit(1)
    click.echo(f"final status: {outcome.state.status}", err=True)


@main.command()
@tasks_dir_option
@click.argument("log_file", type=click.Path(exists=True, dir_okay=False))
def replay(tasks_dir: str | None, log_file: str) -> None:
    """Re-drive a recorded log; exit 0 iff transcripts are byte-identical."""
    lines = Path(log_file).read_text(encoding="utf-8").splitlines()
    header = next(
        (json.loads(ln) for ln in lines if ln.strip() and
         json.loads(ln).get("event_kind") == "session_start"),
        None,
    )
    if header is None:
        raise click.ClickException("log has no session_start record")
    task = load_task_by_id(header["payload"]["task_id"], tasks_dir)
    ok, recorded, fresh = replay_log(task, lines)
    if ok:
        click.echo(f"replay ok: {len(recorded)} records")
        return
    for i, (a, b) in enumerate(zip(recorded, fresh)):
        if a != b:
            click.echo(f"first divergence at record {i}:", err=True)
            click.echo(f"  recorded: {a}", err=True)
            click.echo(f"  fresh:    {b}", err=True)
            break
    else:
        click.echo(
            f"length mismatch: recorded {len(recorded)} vs fresh {len(fresh)}", err=True
        )
    sys.exit(1)


@main.command()
@tasks_dir_option
@click.option("--banned", default=None, help="Letter to splice in (default: task's).")
@click.option("--sets", default=50, show_default=True, help="Sampled example sets.")
@click.option("--per-set", default=5, show_default=True, help="Examples per set.")
@click.option("--inputs", default=100, show_default=True, help="Agreement inputs.")
@click.option("--seed", default=0, show_default=True)
@click.option("--registry", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Identity registry file (defaults to the packaged one).")
@click.option("--check-registry", is_flag=True, help="Also sample-check every entry.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.argument("task_id")
def claim1(
    tasks_dir: str | None,
    banned: str | None,
    sets: int,
    per_set: int,
    inputs: int,
    seed: int,
    registry: str | None,
    check_registry: bool,
    out: str | None,
    task_id: str,
) -> None:
    """Show an example-proof banned-letter double of a task's target."""
    task = load_task_by_id(task_id, tasks_dir)
    reg = load_registry(registry)
    if check_registry:
        for row in verify_registry(reg):
            mark = "ok" if row.get("ok") else f"FAIL {row.get('error', '')}"
            click.echo(f"registry {'+'.join(row['tokens'])}: {mark}")
    report = claim1_report(
        task, banned=banned, reg=reg, n_sets=sets, per_set=per_set,
        n_agree=inputs, seed=seed,
    )
    click.echo(f"target : {task_id}")
    click.echo(f"banned : {report['banned']}")
    click.echo(f"witness: {report['witness']} (length {report['witness_length']},"
               f" bound {report['length_bound']})")
    click.echo(f"example sets: {report['set_failures']}/{report['sets_sampled']} failed")
    click.echo(f"agreement  : {report['agreement_failures']}/{report['agreement_inputs']}"
               " disagreements")
    if out:
        Path(out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    sys.exit(0 if report["ok"] else 1)


@main.command()
@tasks_dir_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
              help="Cache enumerated spaces here.")
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Serve a static UI build at /ui.")
@click.option("--limits", default=None, help="steps,cells,seconds per evaluation.")
def serve(
    tasks_dir: str | None,
    host: str,
    port: int,
    cache_dir: str | None,
    ui_dir: str | None,
    limits: str | None,
) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(
        tasks_dir=tasks_dir, cache_dir=cache_dir,
        limits=_parse_limits(limits), ui_dir=ui_dir,
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
