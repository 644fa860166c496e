"""Command-line frontend: track, synth, eval, and render subcommands.

Exit codes: 0 on success, 2 on any input problem (unreadable files,
malformed lines, bad configuration), 3 when an internal invariant breaks.
Output files are written to a temporary sibling and atomically renamed, so
a failing run never leaves partial output behind.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import io as formats
from .errors import InternalError, ParseError, UserError
from .synth import evaluate, generate
from .tracker import FrameResult, run


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except UnicodeDecodeError as exc:
        raise UserError(f"{path} is not valid UTF-8: {exc.reason}") from exc


def _write_atomic(path: str, text: str) -> None:
    tmp_path = path + ".tmp"
    with open(tmp_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    os.replace(tmp_path, path)


def _load_config(path: str | None) -> dict[str, object]:
    if path is None:
        return {}
    try:
        text = _read_text(path)
    except OSError as exc:
        raise UserError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        return formats.parse_config(text)
    except ParseError as exc:
        exc.path = path
        raise


def _parse_input(path: str, parser):
    try:
        text = _read_text(path)
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parser(text)
    except ParseError as exc:
        exc.path = path
        raise


def _parse_bounds_flag(token: str) -> tuple[float, float]:
    try:
        parsed = formats.parse_config(f"bounds = {token}")
    except ParseError as exc:
        raise UserError(f"invalid --bounds value {token!r}: {exc.message}") from exc
    return parsed["bounds"]  # type: ignore[return-value]


def cmd_track(args: argparse.Namespace) -> int:
    config = formats.tracker_config_from(_load_config(args.config))
    detections = _parse_input(args.detections, formats.parse_detections)
    results = run(detections, config)
    _write_atomic(args.output, formats.write_tracks(results))
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    values = _load_config(args.spec)
    if args.seed is not None:
        values["seed"] = args.seed
    spec = formats.scenario_spec_from(values)
    gt, detections = generate(spec)
    _write_atomic(args.out_detections, formats.write_detections(detections))
    _write_atomic(args.out_ground_truth, formats.write_ground_truth(gt))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    records_by_frame = _parse_input(args.tracks, formats.parse_tracks)
    gt = _parse_input(args.ground_truth, formats.parse_ground_truth)
    results = [
        FrameResult(frame=frame, records=records, born=[], died=[])
        for frame, records in records_by_frame.items()
    ]
    metrics = evaluate(
        results, gt, match_radius=args.radius, include_tentative=args.include_tentative
    )
    print(f"matches={metrics.matches}")
    print(f"misses={metrics.misses}")
    print(f"false_positives={metrics.false_positives}")
    print(f"id_switches={metrics.id_switches}")
    print(f"fragmentation={metrics.fragmentation}")
    print(f"mota={metrics.mota:.6f}")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    records_by_frame = _parse_input(args.tracks, formats.parse_tracks)
    results = [
        FrameResult(frame=frame, records=records, born=[], died=[])
        for frame, records in records_by_frame.items()
    ]
    documents = formats.render_overlay(results, _parse_bounds_flag(args.bounds))
    try:
        os.makedirs(args.out_dir, exist_ok=True)
        for frame, svg in documents:
            _write_atomic(os.path.join(args.out_dir, f"frame_{frame:06d}.svg"), svg)
    except OSError as exc:
        raise UserError(f"cannot write to {args.out_dir}: {exc.strerror}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pointtrack",
        description="Multi-target point tracking with Kalman prediction "
        "and exact assignment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    track = sub.add_parser("track", help="associate a detection file into tracks")
    track.add_argument("detections", help="input detection file (frame,x,y[,conf])")
    track.add_argument("output", help="output track file")
    track.add_argument("--config", default=None, help="configuration file")
    track.set_defaults(func=cmd_track)

    synth = sub.add_parser("synth", help="generate a synthetic scenario")
    synth.add_argument("spec", help="scenario configuration file")
    synth.add_argument("out_detections", help="output detection file")
    synth.add_argument("out_ground_truth", help="output ground-truth file")
    synth.add_argument("--seed", type=int, default=None, help="override the spec seed")
    synth.set_defaults(func=cmd_synth)

    evaluate_ = sub.add_parser("eval", help="score tracks against ground truth")
    evaluate_.add_argument("tracks", help="track file")
    evaluate_.add_argument("ground_truth", help="ground-truth file")
    evaluate_.add_argument("--radius", type=float, default=10.0, help="match radius, px")
    evaluate_.add_argument(
        "--include-tentative",
        action="store_true",
        help="score tentative records too (default: confirmed only)",
    )
    evaluate_.set_defaults(func=cmd_eval)

    render = sub.add_parser("render", help="render one SVG overlay per frame")
    render.add_argument("tracks", help="track file")
    render.add_argument("out_dir", help="output directory for frame_NNNNNN.svg files")
    render.add_argument("--bounds", default="640x480", help="canvas size, WIDTHxHEIGHT")
    render.set_defaults(func=cmd_render)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        name = exc.filename or ""
        print(f"error: {exc.strerror}: {name}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
