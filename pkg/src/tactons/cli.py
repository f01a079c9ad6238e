"""Command line entry points.

tactons render --tacton set4/N --until 1000      presentation schedule
tactons simulate --space s3 --participants 12    synthetic trial CSV
tactons analyze trials.csv                       confusion / IT report
tactons maze-walk mazes/                         guided-walk oracle check
tactons catalog dump                             catalog JSON
tactons serve --config gateway.json              run the session gateway
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .core import DimensionDef, TactonSpace
from .experiments import (
    COMPASS_RING,
    ResponderModel,
    analyze,
    records_from_csv,
    records_to_csv,
    simulate_responder,
)
from .guidance import MazeWorld, guided_walk
from .library import load_catalog
from .player import RecordingDevice, TerminalDevice, VirtualClock, play
from .server import GatewayConfig


def cmd_render(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    tacton = catalog.tacton(args.tacton)
    clock = VirtualClock()
    device = TerminalDevice(clock=clock) if args.ascii else RecordingDevice(clock)
    session = play(tacton, device, clock, cap_ms=args.cap)
    session.advance_to(args.until)
    if not args.ascii:
        sys.stdout.write(device.dump())
    return 0


_CANONICAL_ORDERS = {
    "dir": COMPASS_RING,
    "size": ("small", "large"),
    "speed": ("slow", "medium", "fast"),
}


def _space_for_csv(text: str) -> TactonSpace:
    """Analysis-only space inferred from the stimulus column."""
    import csv as _csv
    import io

    rows = list(_csv.reader(io.StringIO(text)))[1:]
    if not rows:
        raise ValueError("no trials in file")
    names: list[str] = []
    observed: dict[str, set[str]] = {}
    for row in rows:
        if not row:
            continue
        for column in (row[3], row[4]):
            for part in column.split(";"):
                key, _, value = part.partition("=")
                if key not in observed:
                    names.append(key)
                    observed[key] = set()
                observed[key].add(value)
    dims = []
    for name in names:
        canon = _CANONICAL_ORDERS.get(name)
        if canon and observed[name] <= set(canon):
            values = tuple(v for v in canon if v in observed[name])
        else:
            values = tuple(sorted(observed[name]))
        dims.append(DimensionDef(name, values))

    def no_encoder(values: tuple[str, ...]):
        raise ValueError("inferred space carries no tactons")

    return TactonSpace(dimensions=tuple(dims), encoder=no_encoder)


def cmd_simulate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    space = catalog.space(args.space)
    if args.model:
        data = json.loads(Path(args.model).read_text())
        model = ResponderModel(
            space=space,
            confusion={k: float(v) for k, v in data.get("confusion", {}).items()},
            response_time_ms=tuple(data.get("response_time_ms", (900, 2600))),
            exposure_ms=tuple(data.get("exposure_ms", (600, 4000))),
        )
    else:
        model = ResponderModel(space=space, confusion={})
    records = simulate_responder(
        space,
        model,
        n_participants=args.participants,
        n_trials=args.trials,
        seed=args.seed,
        mode=args.mode,
    )
    sys.stdout.write(records_to_csv(space, records))
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    text = Path(args.csv).read_text()
    if args.space:
        space = load_catalog(args.catalog).space(args.space)
    else:
        space = _space_for_csv(text)
    records = records_from_csv(space, text)
    report = analyze(space, records)
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_maze_walk(args: argparse.Namespace) -> int:
    path = Path(args.maze)
    files = sorted(path.glob("*.txt")) if path.is_dir() else [path]
    if not files:
        raise ValueError(f"no maze files under {path}")
    failures = 0
    for file in files:
        maze = MazeWorld.from_file(file)
        expected = maze.distance()
        steps = guided_walk(maze)
        if steps == expected:
            print(f"{file.name}: steps = BFS distance = {steps}")
        else:
            failures += 1
            print(f"{file.name}: steps {steps} != BFS distance {expected}", file=sys.stderr)
    return 1 if failures else 0


def cmd_catalog_dump(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    sys.stdout.write(catalog.dump_json())
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import run

    config = GatewayConfig.from_file(args.config) if args.config else GatewayConfig()
    if args.port is not None:
        config.port = args.port
    if args.host:
        config.host = args.host
    if args.virtual_time:
        config.virtual_time = True
    run(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tactons", description=__doc__)
    parser.add_argument("--catalog", help="catalog JSON overriding built-in tactons")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="print a tacton's presentation schedule")
    p.add_argument("--tacton", required=True, help="catalog name, e.g. set4/N")
    p.add_argument("--until", type=int, default=1000, help="virtual end time in ms")
    p.add_argument("--cap", type=int, default=10_000, help="stimulus cap in ms")
    p.add_argument("--ascii", action="store_true", help="draw frames instead of the dump")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("simulate", help="emit a synthetic trial CSV")
    p.add_argument("--space", default="s3", help="stimulus space id, e.g. s2, s3, set4")
    p.add_argument("--participants", type=int, default=12)
    p.add_argument("--trials", type=int, default=96, help="trials per participant")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("balanced", "uniform"), default="balanced")
    p.add_argument("--model", help="responder JSON: {confusion: {dim: prob}}")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="report error rates and transmitted bits")
    p.add_argument("csv", help="trial CSV file")
    p.add_argument("--space", help="interpret stimuli in this catalog space")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("maze-walk", help="guided walk with shortest-path verification")
    p.add_argument("maze", help="maze file or directory of .txt mazes")
    p.set_defaults(func=cmd_maze_walk)

    p = sub.add_parser("catalog", help="catalog file operations")
    catalog_sub = p.add_subparsers(dest="catalog_command", required=True)
    d = catalog_sub.add_parser("dump", help="print the catalog as JSON")
    d.set_defaults(func=cmd_catalog_dump)

    p = sub.add_parser("serve", help="run the WebSocket session gateway")
    p.add_argument("--config", help="gateway config JSON")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--virtual-time", action="store_true")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
