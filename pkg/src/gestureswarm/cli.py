"""Command-line entry points.

Exit codes: 0 completed run without collisions, 1 malformed flags or
files, 2 collisions occurred, 3 run incomplete at max_time.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from collections import Counter
from pathlib import Path

from .config import RunSetup, setup_from_dict
from .core import ConfigError, PHYSICAL_LATENCY, PHYSICAL_V0_FACTOR
from .engine import load_script, run_scenario
from .runlog import read_trajectory_csv, replay_summary, write_run_outputs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COLLISIONS = 2
EXIT_INCOMPLETE = 3

PORT_ENV_VAR = "GESTURESWARM_PORT"
DEFAULT_PORT = 8765


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; route through CliError for exit 1
    def error(self, message):
        raise CliError(message)


def _add_setup_flags(p: argparse.ArgumentParser, with_seed: bool = True) -> None:
    p.add_argument("--testbed", type=int, choices=(1, 2, 3), help="built-in testbed")
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("--latency", type=float, help="bus delivery delay, seconds")
    p.add_argument("--dt", type=float, help="simulation timestep, seconds")
    if with_seed:
        p.add_argument("--seed", type=int, help="run seed")
    p.add_argument(
        "--physical",
        action="store_true",
        help=f"physical-mode preset: latency {PHYSICAL_LATENCY}s and reduced v0",
    )
    p.add_argument(
        "--v0-factor",
        type=float,
        default=PHYSICAL_V0_FACTOR,
        help="linear-velocity reduction factor used with --physical",
    )


def _build_setup(args) -> RunSetup:
    doc: dict = {}
    if args.config is not None:
        try:
            doc = json.loads(args.config.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise CliError(str(e)) from e
        except json.JSONDecodeError as e:
            raise CliError(f"{args.config}: not valid JSON ({e})") from e
        if not isinstance(doc, dict):
            raise CliError(f"{args.config}: configuration must be a JSON object")
    if args.testbed is not None:
        doc["testbed"] = args.testbed
    if args.latency is not None:
        doc["latency"] = args.latency
    if args.dt is not None:
        doc["dt"] = args.dt
    if getattr(args, "seed", None) is not None:
        doc["seed"] = args.seed
    if args.physical and "latency" not in doc:
        doc["latency"] = PHYSICAL_LATENCY
    setup = setup_from_dict(doc)
    if args.physical:
        setup = dataclasses.replace(
            setup,
            params=dataclasses.replace(
                setup.params, v0=setup.params.v0 * args.v0_factor
            ),
        )
    return setup


def _summary_exit_code(summary: dict) -> int:
    if summary["collisions"]:
        return EXIT_COLLISIONS
    if not summary["completed"]:
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_run(args) -> int:
    setup = _build_setup(args)
    script = load_script(args.script)
    report = run_scenario(setup, script, max_time=args.max_time)
    if args.out is not None:
        write_run_outputs(report, args.out)
    sys.stdout.write(report.summary_json())
    return _summary_exit_code(report.summary_dict())


def cmd_replay(args) -> int:
    setup = _build_setup(args)
    try:
        rows = read_trajectory_csv(args.log)
    except (OSError, ValueError, KeyError) as e:
        raise CliError(f"cannot read trajectory log: {e}") from e
    summary = replay_summary(rows, setup)
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return _summary_exit_code(summary)


def cmd_classify(args) -> int:
    from .classifier import CentroidClassifier, default_classifier
    from .images import (
        BinaryImage,
        DEFAULT_THRESHOLD,
        FRAME_HEIGHT,
        FRAME_WIDTH,
        NET_SIZE,
        load_gray,
        preprocess_frame,
    )

    folder = Path(args.dir)
    if not folder.is_dir():
        raise CliError(f"not a directory: {folder}")
    clf = (
        CentroidClassifier.load(args.model)
        if args.model is not None
        else default_classifier()
    )
    files = sorted(
        p for p in folder.iterdir() if p.suffix.lower() in (".pgm", ".png", ".pbm")
    )
    if not files:
        raise CliError(f"no .pgm/.png images in {folder}")
    histogram: Counter[str] = Counter()
    for path in files:
        img = load_gray(path)
        if (img.width, img.height) == (FRAME_WIDTH, FRAME_HEIGHT):
            silhouette = preprocess_frame(img)
        elif (img.width, img.height) == (NET_SIZE, NET_SIZE):
            silhouette = BinaryImage((img.pixels >= DEFAULT_THRESHOLD).astype("uint8"))
        else:
            print(f"skipping {path.name}: unsupported size {img.width}x{img.height}",
                  file=sys.stderr)
            continue
        gesture, confidence = clf.classify(silhouette)
        histogram[gesture.value] += 1
        if args.verbose:
            print(f"{path.name}: {gesture.value} ({confidence:.3f})")
    for label in sorted(histogram):
        print(f"{label}\t{histogram[label]}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .live import serve_forever

    setup = _build_setup(args)
    port = args.port
    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    serve_forever(setup, host=args.host, port=port, max_time=args.max_time)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="gestureswarm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scripted scenario and write logs")
    _add_setup_flags(p_run)
    p_run.add_argument("--script", type=Path, required=True, help="gesture script JSON")
    p_run.add_argument("--out", type=Path, help="directory for CSV/JSON outputs")
    p_run.add_argument("--max-time", type=float, default=120.0)
    p_run.set_defaults(func=cmd_run)

    p_serve = sub.add_parser("serve", help="start a live operator session")
    _add_setup_flags(p_serve, with_seed=False)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=None,
                         help=f"listen port (default ${PORT_ENV_VAR} or {DEFAULT_PORT})")
    p_serve.add_argument("--max-time", type=float, default=None,
                         help="optional cap on the session's simulated time")
    p_serve.set_defaults(func=cmd_serve)

    p_classify = sub.add_parser("classify", help="batch-classify a folder of images")
    p_classify.add_argument("dir", type=Path)
    p_classify.add_argument("--model", type=Path, help="classifier centroid JSON")
    p_classify.add_argument("-v", "--verbose", action="store_true")
    p_classify.set_defaults(func=cmd_classify)

    p_replay = sub.add_parser("replay", help="recompute a summary from a trajectory log")
    _add_setup_flags(p_replay)
    p_replay.add_argument("log", type=Path)
    p_replay.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
