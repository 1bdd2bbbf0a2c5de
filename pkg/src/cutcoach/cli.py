"""Headless entry points: simulate, replay, report, serve.

Exit codes: 0 success, 1 verification failure (replay mismatch or a
refused trace), 2 usage error (missing file, malformed config, bad flag).
Output files are pure functions of the manifest: headers carry logical
session time only, never wall-clock, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import glob
import json
import sys
from dataclasses import replace
from pathlib import Path

from .geometry import (
    LinePath,
    PathError,
    circle_path,
    l_shaped_path,
    load_path,
    star_path,
    straight_line_path,
)
from .metrics import format_metrics_table, metrics
from .pipeline import ConfigError, EngineConfig
from .simulation import (
    CutterBehaviorModel,
    ReplayError,
    SessionTrace,
    replay,
    run_behavior,
    traces_equal,
)

BUILTIN_PATHS = {
    "straight": straight_line_path,
    "l-shape": l_shaped_path,
    "star": star_path,
    "circle": circle_path,
}


def _parse_seeds(spec: str) -> list[int]:
    """Parse '1..10' / '3' / '1,4,9..11' into a sorted unique seed list."""
    seeds: list[int] = []
    for atom in spec.split(","):
        atom = atom.strip()
        if not atom:
            continue
        if ".." in atom:
            lo, _, hi = atom.partition("..")
            try:
                lo_i, hi_i = int(lo), int(hi)
            except ValueError:
                raise ConfigError(f"seeds: bad range {atom!r}") from None
            if hi_i < lo_i:
                raise ConfigError(f"seeds: empty range {atom!r}")
            seeds.extend(range(lo_i, hi_i + 1))
        else:
            try:
                seeds.append(int(atom))
            except ValueError:
                raise ConfigError(f"seeds: bad value {atom!r}") from None
    if not seeds:
        raise ConfigError("seeds: at least one seed required")
    return sorted(set(seeds))


def _resolve_path(spec: str) -> LinePath:
    if spec in BUILTIN_PATHS:
        return BUILTIN_PATHS[spec]()
    file = Path(spec)
    if not file.exists():
        raise ConfigError(
            f"path: {spec!r} is neither a file nor one of "
            f"{sorted(BUILTIN_PATHS)}"
        )
    return load_path(file)


def _apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply --set section.key=value entries onto a raw config dict."""
    for entry in overrides:
        target, eq, raw = entry.partition("=")
        if not eq:
            raise ConfigError(f"--set: expected section.key=value, got {entry!r}")
        section, dot, key = target.partition(".")
        if not dot:
            raise ConfigError(f"--set: expected section.key=value, got {entry!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw  # bare strings are fine, e.g. mode values
        doc.setdefault(section, {})
        if not isinstance(doc[section], dict):
            raise ConfigError(f"--set: section {section!r} is not an object")
        doc[section][key] = value
    return doc


def _load_run_config(args) -> tuple[EngineConfig, CutterBehaviorModel]:
    """Config file + --set overrides + --mode flag -> engine and behavior."""
    doc: dict = {}
    if args.config:
        file = Path(args.config)
        if not file.exists():
            raise ConfigError(f"config: file not found: {file}")
        try:
            doc = json.loads(file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {file}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config: top level must be a JSON object")
    doc = _apply_overrides(doc, getattr(args, "set", None) or [])

    behavior_doc = doc.pop("behavior", {}) or {}
    if not isinstance(behavior_doc, dict):
        raise ConfigError("config: section 'behavior' must be an object")
    try:
        behavior = CutterBehaviorModel(**behavior_doc)
    except TypeError as exc:
        raise ConfigError(f"config: behavior: {exc}") from exc

    engine = EngineConfig.from_dict(doc)
    if getattr(args, "mode", None):
        engine = replace(engine, mode=args.mode)
    return engine, behavior


def _expand_traces(patterns: list[str]) -> list[Path]:
    files: list[Path] = []
    for pattern in patterns:
        hits = sorted(glob.glob(pattern))
        if hits:
            files.extend(Path(h) for h in hits)
        elif Path(pattern).exists():
            files.append(Path(pattern))
        else:
            raise ConfigError(f"trace: no files match {pattern!r}")
    if not files:
        raise ConfigError("trace: at least one trace file required")
    return files


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    path = _resolve_path(args.path)
    engine, behavior = _load_run_config(args)
    seeds = _parse_seeds(args.seeds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for seed in seeds:
        model = replace(behavior, seed=seed)
        trace = run_behavior(path, model, engine, max_duration_ms=args.duration)
        trace_file = out / f"trace_seed{seed:04d}.trace"
        trace_file.write_text(trace.serialize(), encoding="utf-8")
        report = metrics(trace)
        metrics_file = out / f"metrics_seed{seed:04d}.json"
        metrics_file.write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        rows.append((trace_file.name, report))
    print(format_metrics_table(rows))
    return 0


def cmd_replay(args) -> int:
    failures = 0
    for file in _expand_traces(args.traces):
        try:
            original = SessionTrace.load(file)
            rerun = replay(original)
        except ReplayError as exc:
            print(f"FAIL {file}: refused: {exc}")
            failures += 1
            continue
        ok, why = traces_equal(original, rerun)
        if ok:
            print(f"ok   {file}")
        else:
            print(f"FAIL {file}: {why}")
            failures += 1
    return 1 if failures else 0


def cmd_report(args) -> int:
    rows = []
    for file in _expand_traces(args.traces):
        trace = SessionTrace.load(file)
        rows.append((file.name, metrics(trace)))
    print(format_metrics_table(rows))
    if args.json:
        payload = {name: report.to_dict() for name, report in rows}
        Path(args.json).write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    path = _resolve_path(args.path)
    engine, _ = _load_run_config(args)
    frontend = args.frontend
    if frontend is None and Path("frontend/dist").is_dir():
        frontend = "frontend/dist"
    app = create_app(path, engine, frontend_dir=frontend)
    print(f"session service on http://{args.host}:{args.port} (ws: /session)")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutcoach",
        description="Scissors line-following trainer: simulate, verify, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", help="JSON config file (engine + behavior sections)")
        p.add_argument(
            "--set",
            action="append",
            metavar="SECTION.KEY=VALUE",
            help="override one config value (repeatable)",
        )
        p.add_argument(
            "--mode",
            choices=("sensor", "oracle"),
            help="severity source driving feedback",
        )

    sim = sub.add_parser("simulate", help="run seeded behavior sessions")
    sim.add_argument("--path", required=True, help="path file or builtin name")
    sim.add_argument("--seeds", required=True, help="e.g. 1..10 or 1,2,5")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--duration", type=int, default=120_000, help="max run ms")
    add_config_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("replay", help="golden-verify recorded traces")
    rep.add_argument("traces", nargs="+", help="trace files or globs")
    rep.set_defaults(func=cmd_replay)

    rpt = sub.add_parser("report", help="metrics table over traces")
    rpt.add_argument("traces", nargs="+", help="trace files or globs")
    rpt.add_argument("--json", help="also write aggregate metrics JSON here")
    rpt.set_defaults(func=cmd_report)

    srv = sub.add_parser("serve", help="interactive session service for the UI")
    srv.add_argument("--path", default="straight", help="path file or builtin name")
    srv.add_argument("--port", type=int, default=8765)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--frontend", help="static UI bundle directory")
    add_config_flags(srv)
    srv.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ConfigError, PathError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
