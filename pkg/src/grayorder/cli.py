"""Batch command-line front-end.

Subcommands: compare, batch, hist, baseline. Exit codes:

  0  success
  2  contract violation (size mismatch in strict mode, bad flags/modes,
     too-short sequence for a neighbor feature)
  3  I/O failure (missing or unwritable file)
  4  decode failure (malformed image, unsupported bit depth, bad manifest)
  5  batch completed but at least one row failed

The CLI calls the library in-process and never touches the network.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import sys
from pathlib import Path

from .baseline import BaselineKind, BaselineSpec, generate, ideal_raster
from .distribution import build
from .errors import (
    GrayOrderError,
    MalformedFile,
    ManifestMalformed,
    UnsupportedBitDepth,
)
from .features import FeatureKind, extract
from .ingest import Traversal, boustrophedon, decode_auto, encode_pgm, row_major
from .order import ImageRef, Mode, compare
from .report import (
    format_float,
    render_csv,
    render_hist_csv,
    render_json,
    render_text,
)

EXIT_OK = 0
EXIT_CONTRACT = 2
EXIT_IO = 3
EXIT_DECODE = 4
EXIT_BATCH = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grayorder",
        description="Relative degree of order of grayscale images "
        "(renormalize-then-compare entropy functional).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compare", help="compare two images across the mode matrix")
    pc.add_argument("image_a")
    pc.add_argument("image_b")
    _add_compare_flags(pc)
    pc.add_argument("--format", choices=("json", "csv", "text"), default="text")
    pc.add_argument("--out", default=None, help="write the report here instead of stdout")
    pc.set_defaults(handler=_cmd_compare)

    pb = sub.add_parser("batch", help="compare every pair in a path_a,path_b manifest")
    pb.add_argument("manifest")
    _add_compare_flags(pb)
    pb.add_argument("--out", default=None, help="aggregate CSV path (default stdout)")
    pb.add_argument(
        "--report-dir",
        default=None,
        help="also write one JSON report per manifest row into this directory",
    )
    pb.set_defaults(handler=_cmd_batch)

    ph = sub.add_parser("hist", help="dump a feature histogram as CSV")
    ph.add_argument("image")
    ph.add_argument(
        "--feature",
        required=True,
        choices=tuple(kind.value for kind in FeatureKind),
    )
    ph.add_argument(
        "--traversal",
        choices=tuple(t.value for t in Traversal),
        default=Traversal.BOUSTROPHEDON.value,
    )
    ph.add_argument("--out", default=None)
    ph.set_defaults(handler=_cmd_hist)

    pg = sub.add_parser("baseline", help="generate a reference image as binary PGM")
    pg.add_argument("--kind", required=True, choices=("noise", "black"))
    pg.add_argument("--width", type=int, required=True)
    pg.add_argument("--height", type=int, required=True)
    pg.add_argument("--seed", type=int, default=0, help="noise only, 64-bit unsigned")
    pg.add_argument("--level", type=int, default=0, help="black only, gray level 0-255")
    pg.add_argument(
        "--ideal-noise",
        action="store_true",
        help="with --kind noise: emit the deterministic raster whose gray "
        "histogram is exactly uniform (the analytic disorder zero) instead "
        "of a random sample; pixel count must be a multiple of 256",
    )
    pg.add_argument("--out", required=True)
    pg.set_defaults(handler=_cmd_baseline)

    return parser


def _add_compare_flags(parser: argparse.ArgumentParser) -> None:
    strictness = parser.add_mutually_exclusive_group()
    strictness.add_argument(
        "--strict",
        dest="strict",
        action="store_true",
        default=True,
        help="require equal pixel counts (default)",
    )
    strictness.add_argument(
        "--lenient",
        dest="strict",
        action="store_false",
        help="allow unequal sizes; densities are per-pixel anyway",
    )
    parser.add_argument(
        "--epsilon",
        type=float,
        default=0.0,
        help="zero-bin smoothing for the divergence form (default 0: report inf)",
    )
    modes = parser.add_mutually_exclusive_group()
    modes.add_argument(
        "--modes",
        default=None,
        help="comma-separated feature:renorm:reference triples, e.g. gray:mass:first",
    )
    modes.add_argument(
        "--all-modes",
        dest="all_modes",
        action="store_true",
        help="evaluate the full 32-mode matrix (default)",
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (MalformedFile, UnsupportedBitDepth, ManifestMalformed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GrayOrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


def _parse_common(args):
    if args.epsilon < 0.0:
        raise GrayOrderError("--epsilon must be >= 0")
    modes = None
    if args.modes is not None:
        try:
            modes = [Mode.parse(part) for part in args.modes.split(",") if part.strip()]
        except ValueError as exc:
            raise GrayOrderError(str(exc)) from None
        if not modes:
            raise GrayOrderError("--modes given but no modes parsed")
    return modes


def _load_image(path: str):
    raw = Path(path).read_bytes()
    grid = decode_auto(raw)
    return grid, ImageRef(path, hashlib.sha256(raw).hexdigest())


def _cmd_compare(args) -> int:
    modes = _parse_common(args)
    grid_a, ref_a = _load_image(args.image_a)
    grid_b, ref_b = _load_image(args.image_b)
    report = compare(
        grid_a,
        grid_b,
        modes=modes,
        epsilon=args.epsilon,
        strict=args.strict,
        ref_a=ref_a,
        ref_b=ref_b,
    )
    for warning in report.clipping_warnings():
        print(f"warning: {warning}", file=sys.stderr)
    rendered = {"json": render_json, "csv": render_csv, "text": render_text}[
        args.format
    ](report)
    if args.out is not None:
        Path(args.out).write_text(rendered, encoding="ascii")
        sys.stdout.write(render_text(report))  # headline always reaches stdout
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def _read_manifest(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ManifestMalformed(f"manifest is not UTF-8 text: {exc}") from None
    rows = list(csv.reader(text.splitlines()))
    if not rows or [cell.strip() for cell in rows[0]] != ["path_a", "path_b"]:
        raise ManifestMalformed("manifest must start with a 'path_a,path_b' header")
    pairs = []
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ManifestMalformed(f"manifest line {number}: expected 2 columns")
        pairs.append((row[0].strip(), row[1].strip()))
    return pairs


def _cmd_batch(args) -> int:
    modes = _parse_common(args)
    pairs = _read_manifest(args.manifest)
    base_dir = Path(args.manifest).resolve().parent
    report_dir = None
    if args.report_dir is not None:
        report_dir = Path(args.report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)

    aggregate = [["path_a", "path_b", "status", "headline_delta_s", "error"]]
    failures = 0
    for index, (raw_a, raw_b) in enumerate(pairs):
        path_a = str(base_dir / raw_a) if not Path(raw_a).is_absolute() else raw_a
        path_b = str(base_dir / raw_b) if not Path(raw_b).is_absolute() else raw_b
        try:
            grid_a, ref_a = _load_image(path_a)
            grid_b, ref_b = _load_image(path_b)
            report = compare(
                grid_a,
                grid_b,
                modes=modes,
                epsilon=args.epsilon,
                strict=args.strict,
                ref_a=ref_a,
                ref_b=ref_b,
            )
        except (GrayOrderError, OSError) as exc:
            failures += 1
            aggregate.append([raw_a, raw_b, "error", "", _one_line(str(exc))])
            continue
        headline = report.headline
        scalar = "" if headline is None else format_float(headline.value.delta_s)
        aggregate.append([raw_a, raw_b, "ok", scalar, ""])
        if report_dir is not None:
            (report_dir / f"pair_{index:04d}.json").write_text(
                render_json(report), encoding="ascii"
            )

    out = _csv_text(aggregate)
    if args.out is not None:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_BATCH if failures else EXIT_OK


def _cmd_hist(args) -> int:
    grid, _ = _load_image(args.image)
    traverse = (
        boustrophedon if args.traversal == Traversal.BOUSTROPHEDON.value else row_major
    )
    dist = build(extract(traverse(grid), FeatureKind(args.feature)))
    rendered = render_hist_csv(dist)
    if args.out is not None:
        Path(args.out).write_text(rendered, encoding="ascii")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def _cmd_baseline(args) -> int:
    if args.ideal_noise:
        if args.kind != "noise":
            raise GrayOrderError("--ideal-noise applies only to --kind noise")
        try:
            grid = ideal_raster(args.width, args.height)
        except ValueError as exc:
            raise GrayOrderError(str(exc)) from None
    else:
        try:
            spec = BaselineSpec(
                kind=BaselineKind(args.kind),
                width=args.width,
                height=args.height,
                seed=args.seed,
                level=args.level,
            )
        except ValueError as exc:
            raise GrayOrderError(str(exc)) from None
        grid = generate(spec)
    Path(args.out).write_bytes(encode_pgm(grid))
    return EXIT_OK


def _one_line(text: str) -> str:
    return " ".join(text.split())


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
