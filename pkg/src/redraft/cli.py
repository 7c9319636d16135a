"""Command-line front end.

Exit codes: 0 success, 1 input or validation error, 2 incomplete exploration,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from . import bench
from .diagram import ClassDiagram, DiagramError
from .engine import DEFAULT_MAX_STATES, Limits, check_confluence, explore, normalize
from .fixtures import FIXTURES
from .io import export_dot, ladder, parse_native, parse_xmi, replicate, write_native, write_xmi
from .rules import Mode, Policy, TieHandling

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCOMPLETE = 2
EXIT_INTERNAL = 3

MAX_STATES_ENV = "REDRAFT_MAX_STATES"

_READERS = {"xmi": parse_xmi, "native": parse_native}
_WRITERS = {"xmi": write_xmi, "native": write_native}
_EXTENSIONS = {".xmi": "xmi", ".native": "native", ".dot": "dot"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: Path | None
    output: Path | None
    format: str | None
    policy: Policy
    limits: Limits
    report: Path | None


def _format_for(path: Path, override: str | None, *, writing: bool = False) -> str:
    if override:
        return override
    fmt = _EXTENSIONS.get(path.suffix.lower())
    if fmt is None or (fmt == "dot" and not writing):
        raise UsageError(f"cannot infer format of {path} (use --format xmi|native)")
    return fmt


def _read(path: Path, fmt: str) -> ClassDiagram:
    return _READERS[fmt](path.read_bytes())


def _write(path: Path, d: ClassDiagram, fmt: str) -> None:
    if fmt == "dot":
        path.write_text(export_dot(d), encoding="utf-8")
    else:
        path.write_bytes(_WRITERS[fmt](d))


def _write_records(path: Path | None, records: list[dict[str, object]]) -> None:
    if path is None:
        return
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _check_paths(cfg: RunConfig) -> None:
    if cfg.input is not None and not cfg.input.is_file():
        raise UsageError(f"no such input file: {cfg.input}")
    for out in (cfg.output, cfg.report):
        if out is not None and not out.resolve().parent.is_dir():
            raise UsageError(f"output directory does not exist: {out.parent}")


def run_transform(cfg: RunConfig, out: TextIO) -> int:
    assert cfg.input is not None
    in_fmt = _format_for(cfg.input, cfg.format)
    out_fmt = _format_for(cfg.output, cfg.format if cfg.format else None, writing=True) if cfg.output else None
    d = _read(cfg.input, in_fmt)
    started = time.perf_counter()
    result, trace = normalize(d, Policy(cfg.policy.mode, TieHandling.DETERMINISTIC))
    seconds = time.perf_counter() - started
    if cfg.output is not None and out_fmt is not None:
        _write(cfg.output, result, out_fmt)
    before, after = len(d.properties), len(result.properties)
    print(f"steps: {trace.steps}", file=out)
    print(f"properties: {before} -> {after} ({after - before:+d})", file=out)
    print(f"time: {seconds:.3f}s", file=out)

    # entities are never deleted, so every step can be described against the result
    records: list[dict[str, object]] = [
        {
            "record": "step",
            "index": i,
            "rule": entry.step.rule.value,
            "step": entry.step.describe(result),
            "count": entry.step.count,
            "size_after": entry.size_after,
        }
        for i, entry in enumerate(trace, start=1)
    ]
    records.append(
        {
            "record": "summary",
            "command": "transform",
            "steps": trace.steps,
            "properties_before": before,
            "properties_after": after,
            "size_before": d.size,
            "size_after": result.size,
            "seconds": round(seconds, 6),
        }
    )
    _write_records(cfg.report, records)
    return EXIT_OK


def _explore_summary(cfg: RunConfig, out: TextIO):
    assert cfg.input is not None
    d = _read(cfg.input, _format_for(cfg.input, cfg.format))
    space = explore(d, cfg.policy, cfg.limits)
    print(f"states: {space.stats.states}", file=out)
    print(f"transitions: {space.stats.transitions}", file=out)
    print(f"finals: {len(space.finals)}", file=out)
    if space.complete:
        print("complete: yes", file=out)
    else:
        print("complete: no (incomplete: exploration limit reached)", file=out)
    print(f"time: {space.stats.seconds:.3f}s", file=out)
    record = {
        "record": "summary",
        "command": cfg.command,
        "states": space.stats.states,
        "transitions": space.stats.transitions,
        "finals": len(space.finals),
        "complete": space.complete,
        "seconds": round(space.stats.seconds, 6),
    }
    return space, record


def run_explore(cfg: RunConfig, out: TextIO) -> int:
    space, record = _explore_summary(cfg, out)
    _write_records(cfg.report, [record])
    return EXIT_OK if space.complete else EXIT_INCOMPLETE


def run_confluence(cfg: RunConfig, out: TextIO) -> int:
    space, record = _explore_summary(cfg, out)
    if not space.complete:
        print("confluent: unknown (cannot decide on partial exploration)", file=out)
        _write_records(cfg.report, [record])
        return EXIT_INCOMPLETE
    verdict = check_confluence(space)
    print(f"confluent: {'yes' if verdict.confluent else 'no'}", file=out)
    record["confluent"] = verdict.confluent
    if cfg.output is not None:
        fmt = cfg.format or "native"
        cfg.output.mkdir(parents=True, exist_ok=True)
        finals = space.final_diagrams() if verdict.confluent else verdict.witnesses
        for i, w in enumerate(finals, start=1):
            path = cfg.output / f"final-{i}.{fmt}"
            _write(path, w, fmt)
            print(f"wrote {path}", file=out)
    _write_records(cfg.report, [record])
    return EXIT_OK


def run_generate(args: argparse.Namespace, cfg: RunConfig, out: TextIO) -> int:
    if cfg.output is None:
        raise UsageError("generate needs -o PATH")
    if args.shape == "ladder":
        d = ladder(args.classes, args.attrs, with_root=not args.no_root, seed=args.seed)
    elif args.shape == "replicate":
        if args.base is None:
            raise UsageError("replicate needs --base PATH or --base fixture:NAME")
        d = replicate(_load_base(args.base, cfg.format), args.copies, seed=args.seed)
    else:
        if args.name not in FIXTURES:
            raise UsageError(f"unknown fixture {args.name!r} (choose from {', '.join(FIXTURES)})")
        d = FIXTURES[args.name]()
    _write(cfg.output, d, _format_for(cfg.output, cfg.format, writing=True))
    print(f"classes: {len(d)}, attributes: {len(d.properties)}, size: {d.size}", file=out)
    return EXIT_OK


def _load_base(spec: str, fmt: str | None) -> ClassDiagram:
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        if name not in FIXTURES:
            raise UsageError(f"unknown fixture {name!r}")
        return FIXTURES[name]()
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"no such input file: {path}")
    return _read(path, _format_for(path, fmt))


def run_bench(args: argparse.Namespace, cfg: RunConfig, out: TextIO) -> int:
    names = [n.strip() for n in args.presets.split(",") if n.strip()] if args.presets is not None else list(bench.PRESETS)
    for name in names:
        if name not in bench.PRESETS:
            raise UsageError(f"unknown preset {name!r} (choose from {', '.join(bench.PRESETS)})")
    records = []
    for name in names:
        records.append(bench.run_preset(name, trace_memory=not args.no_memory))
    out.write(bench.format_table(records))
    _write_records(cfg.report, records)
    return EXIT_OK


def _env_max_states() -> int:
    raw = os.environ.get(MAX_STATES_ENV)
    if not raw:
        return DEFAULT_MAX_STATES
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{MAX_STATES_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{MAX_STATES_ENV} must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redraft", description="Class-diagram restructuring.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, policy: str, ties: str) -> None:
        p.add_argument("--format", choices=("xmi", "native"), help="override format inference")
        p.add_argument("--policy", choices=("priority", "free"), default=policy)
        p.add_argument("--ties", choices=("det", "branch"), default=ties)
        p.add_argument("--report", type=Path, help="write a JSON-lines report here")

    p = sub.add_parser("transform", help="rewrite to the deterministic normal form")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path)
    common(p, policy="priority", ties="det")

    for name, helptext in (("explore", "enumerate all rewriting orders"), ("confluence", "decide confluence")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input", type=Path)
        if name == "confluence":
            p.add_argument("-o", "--output", type=Path, help="directory for final-state witnesses")
        p.add_argument("--max-states", type=int, default=None)
        p.add_argument("--max-seconds", type=float, default=None)
        common(p, policy="free", ties="branch")

    p = sub.add_parser("generate", help="write a benchmark or fixture diagram")
    p.add_argument("shape", choices=("ladder", "replicate", "fixture"))
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--format", choices=("xmi", "native"))
    p.add_argument("--classes", type=int, default=500)
    p.add_argument("--attrs", type=int, default=10)
    p.add_argument("--no-root", action="store_true", help="ladder without the common superclass")
    p.add_argument("--base", help="replicate: base diagram path or fixture:NAME")
    p.add_argument("--copies", type=int, default=1000)
    p.add_argument("--name", default="testcase1", help="fixture name")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("bench", help="run the benchmark presets")
    p.add_argument("--presets", default=None, help=f"comma-separated subset of {','.join(bench.PRESETS)}")
    p.add_argument("--no-memory", action="store_true", help="skip the traced-memory run")
    p.add_argument("--report", type=Path)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    policy = Policy(
        Mode(getattr(args, "policy", "priority")),
        TieHandling(getattr(args, "ties", "det")),
    )
    max_states = getattr(args, "max_states", None)
    if max_states is None:
        max_states = _env_max_states()
    if max_states < 1:
        raise UsageError("--max-states must be positive")
    limits = Limits(max_states, getattr(args, "max_seconds", None))
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
        format=getattr(args, "format", None),
        policy=policy,
        limits=limits,
        report=getattr(args, "report", None),
    )


def main(argv: Sequence[str] | None = None, *, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        _check_paths(cfg)
        if cfg.command == "transform":
            return run_transform(cfg, out)
        if cfg.command == "explore":
            return run_explore(cfg, out)
        if cfg.command == "confluence":
            return run_confluence(cfg, out)
        if cfg.command == "generate":
            return run_generate(args, cfg, out)
        return run_bench(args, cfg, out)
    except (UsageError, DiagramError, OSError, ValueError) as exc:
        print(f"redraft: error: {exc}", file=err)
        return EXIT_INPUT
    except bench.PresetError as exc:
        print(f"redraft: error: {exc}", file=err)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"redraft: internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
