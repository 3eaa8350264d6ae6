"""Command-line entry point.

``tablegrid extract`` runs the full pipeline on one or more PGM/PPM pages;
``tablegrid synth`` renders a fixture spec into a page image, OCR TSV and
ground-truth JSON.

Exit codes: 0 when every input yields at least one table, 2 when some input
has no table (and nothing failed), 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import synth
from .emit import EmitConfig, render_outputs, write_files
from .morphology import kernel_length
from .ocrwords import OcrWord, parse_ocr_tsv
from .pipeline import PipelineConfig, PipelineResult, extract_tables
from .raster import binary_to_gray, encode_pgm, read_image

log = logging.getLogger("tablegrid")

OCR_CMD_ENV = "TABLEGRID_OCR_CMD"
EXIT_OK, EXIT_ERROR, EXIT_NO_TABLE = 0, 1, 2

DEBUG_FILES = (
    "01_gray.pgm", "02_binary.pgm", "03_vertical.pgm", "04_horizontal.pgm",
    "05_skeleton.pgm", "06_contours.pgm", "07_groups.pgm", "histogram.txt",
)


@dataclass
class RunConfig:
    inputs: list[Path]
    output_dir: Path = Path(".")
    ocr_tsv: list[Path] = field(default_factory=list)
    ocr_cmd: str | None = None
    use_ocr: bool = True
    formats: str = "csv"
    debug_dir: Path | None = None
    jobs: int = 1
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)


class OcrError(RuntimeError):
    pass


def _load_words(cfg: RunConfig, index: int, image: Path) -> list[OcrWord] | None:
    if cfg.ocr_tsv:
        return parse_ocr_tsv(Path(cfg.ocr_tsv[index]).read_text(encoding="utf-8"))
    if not cfg.use_ocr:
        return None
    template = cfg.ocr_cmd or os.environ.get(OCR_CMD_ENV)
    if not template:
        log.warning("%s: no OCR source, cells will be empty", image)
        return None
    argv = [tok.replace("{input}", str(image)) for tok in shlex.split(template)]
    proc = subprocess.run(argv, capture_output=True, text=True, encoding="utf-8")
    if proc.returncode != 0:
        raise OcrError(f"OCR command {argv[0]!r} exited with {proc.returncode}: {proc.stderr.strip()}")
    return parse_ocr_tsv(proc.stdout)


def contour_image(result: PipelineResult) -> np.ndarray:
    img = np.zeros(result.gray.shape, dtype=np.uint8)
    for c in result.contours:
        xs, ys = zip(*c.points)
        img[list(ys), list(xs)] = 255 if c.kind == "outer" else 128
    return img


def group_label_image(result: PipelineResult) -> np.ndarray:
    img = np.zeros(result.gray.shape, dtype=np.uint8)
    for g in result.groups:
        o = g.outline
        img[o.y_min : o.y_max + 1, o.x_min : o.x_max + 1] = min(g.id, 255)
    return img


def debug_artifacts(result: PipelineResult) -> dict[str, bytes]:
    sk = result.skeleton
    images = (
        result.gray, binary_to_gray(result.binary), binary_to_gray(sk.vertical),
        binary_to_gray(sk.horizontal), binary_to_gray(sk.combined),
        contour_image(result), group_label_image(result),
    )
    out = {name: encode_pgm(img) for name, img in zip(DEBUG_FILES, images)}
    out["histogram.txt"] = "".join(f"{int(c)}\n" for c in result.histogram.bins).encode("ascii")
    return out


def dump_debug(result: PipelineResult, debug_dir: Path) -> None:
    """Write the stage images; failures are reported but never fatal."""
    try:
        write_files(debug_dir, debug_artifacts(result))
    except OSError as exc:
        print(f"warning: debug dump to {debug_dir} failed: {exc}", file=sys.stderr)


def _provenance(cfg: RunConfig, image: Path, gray: np.ndarray) -> dict:
    params = cfg.pipeline.as_dict()
    params["kernel_length"] = kernel_length(gray.shape[0], cfg.pipeline.kernel_divisor)
    return {"source": str(image), "parameters": params}


def _process(cfg: RunConfig, index: int, image: Path) -> tuple[int, str | None]:
    tag = f"{image}"
    stage = "raster"
    try:
        gray = read_image(image)
        stage = "ocrwords"
        words = _load_words(cfg, index, image)
        stage = "pipeline"
        result = extract_tables(gray, words, cfg.pipeline)
    except (OSError, ValueError, RuntimeError) as exc:
        module = type(exc).__module__
        if module.startswith("tablegrid."):
            stage = module.rsplit(".", 1)[-1]
        return EXIT_ERROR, f"{tag}: error: {stage}: {exc}"

    if cfg.debug_dir is not None:
        sub = cfg.debug_dir if len(cfg.inputs) == 1 else cfg.debug_dir / image.stem
        dump_debug(result, sub)

    if result.orphans:
        log.warning("%s: %d cell(s) outside every table", tag, len(result.orphans))
    if not result.found:
        return EXIT_NO_TABLE, f"{tag}: no table"

    files = render_outputs(
        result.grids, _provenance(cfg, image, gray), EmitConfig(cfg.output_dir, image.stem, cfg.formats)
    )
    try:
        written = write_files(cfg.output_dir, files)
    except OSError as exc:
        return EXIT_ERROR, f"{tag}: error: emit: {exc}"
    shapes = ", ".join(f"{g.n_rows}x{g.n_cols}" for g in result.grids)
    return EXIT_OK, f"{tag}: {len(result.grids)} table(s) [{shapes}] -> {', '.join(p.name for p in written)}"


def run(cfg: RunConfig) -> int:
    if cfg.ocr_tsv and len(cfg.ocr_tsv) != len(cfg.inputs):
        print("error: cli: give one --ocr-tsv per input image", file=sys.stderr)
        return EXIT_ERROR
    stems = [p.stem for p in cfg.inputs]
    if len(set(stems)) != len(stems):
        print("error: cli: input file names must have distinct stems", file=sys.stderr)
        return EXIT_ERROR

    jobs = max(1, min(cfg.jobs, len(cfg.inputs)))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        outcomes = list(pool.map(lambda a: _process(cfg, *a), enumerate(cfg.inputs)))

    for code, msg in outcomes:
        print(msg, file=sys.stdout if code == EXIT_OK else sys.stderr)
    codes = {code for code, _ in outcomes}
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    if EXIT_NO_TABLE in codes:
        return EXIT_NO_TABLE
    return EXIT_OK


def _odd(value: str) -> int:
    n = int(value)
    if n < 3 or n % 2 == 0:
        raise argparse.ArgumentTypeError("must be an odd integer >= 3")
    return n


def _positive(kind):
    def parse(value: str):
        v = kind(value)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tablegrid", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="extract tables from page images")
    ex.add_argument("inputs", nargs="+", type=Path, help="P5/P6 page images")
    ex.add_argument("-o", "--output-dir", type=Path, default=Path("."))
    ex.add_argument("--format", choices=("csv", "json", "both"), default="csv")
    ex.add_argument("--ocr-tsv", type=Path, action="append", default=[],
                    help="OCR word TSV; repeat once per input image")
    ex.add_argument("--ocr-cmd", help=f"OCR command template with {{input}}; default ${OCR_CMD_ENV}")
    ex.add_argument("--no-ocr", action="store_true", help="emit table structure with empty cells")
    ex.add_argument("--debug-dir", type=Path)
    ex.add_argument("--jobs", type=_positive(int), default=1)

    d = PipelineConfig()
    ex.add_argument("--binarize", choices=("adaptive", "otsu"), default=d.binarize_mode)
    ex.add_argument("--otsu-threshold", type=int, help="fixed global threshold for --binarize=otsu")
    ex.add_argument("--block-size", type=_odd, default=d.block_size)
    ex.add_argument("--offset-c", type=float, default=d.offset_c)
    ex.add_argument("--kernel-divisor", type=_positive(int), default=d.kernel_divisor)
    ex.add_argument("--open-iterations", type=_positive(int), default=d.open_iterations)
    ex.add_argument("--line-threshold", type=_positive(float), default=d.line_threshold)
    ex.add_argument("--row-mode", choices=("chain", "anchor"), default=d.row_mode)
    ex.add_argument("--conf-threshold", type=float, default=d.conf_threshold)
    ex.add_argument("--min-cell-area", type=_positive(int), default=d.min_cell_area)
    ex.add_argument("--containment-slack", type=int, default=d.containment_slack)

    sy = sub.add_parser("synth", help="render a fixture spec to PGM + OCR TSV + ground truth")
    sy.add_argument("spec", type=Path, help="fixture JSON")
    sy.add_argument("-o", "--out-dir", type=Path, default=Path("."))
    sy.add_argument("--name", help="output base name (default: spec file stem)")
    sy.add_argument("--gradient", type=float, nargs=2, metavar=("TOP", "BOTTOM"),
                    help="override the illumination gain ramp")
    return parser


def _synth(args) -> int:
    specs, page = synth.load_fixture(args.spec)
    if args.gradient:
        page = replace(page, gradient=tuple(args.gradient))
    img, gt = synth.render(specs, page)
    name = args.name or args.spec.stem
    truth = {
        "tables": [
            {"outline": t.outline.as_list(), "cells": [[c.as_list() for c in row] for row in t.cells],
             "texts": [list(r) for r in t.texts]}
            for t in gt.tables
        ]
    }
    write_files(args.out_dir, {
        f"{name}.pgm": encode_pgm(img),
        f"{name}.tsv": synth.emit_ocr_tsv(gt).encode("utf-8"),
        f"{name}_truth.json": (json.dumps(truth, indent=2) + "\n").encode("utf-8"),
    })
    print(f"wrote {name}.pgm, {name}.tsv, {name}_truth.json to {args.out_dir}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    if args.command == "synth":
        try:
            return _synth(args)
        except (OSError, ValueError) as exc:
            print(f"error: synth: {exc}", file=sys.stderr)
            return EXIT_ERROR

    try:
        pipeline = PipelineConfig(
            binarize_mode=args.binarize, block_size=args.block_size, offset_c=args.offset_c,
            otsu_threshold=args.otsu_threshold, kernel_divisor=args.kernel_divisor,
            open_iterations=args.open_iterations, line_threshold=args.line_threshold,
            row_mode=args.row_mode, conf_threshold=args.conf_threshold,
            min_cell_area=args.min_cell_area, containment_slack=args.containment_slack,
        )
    except ValueError as exc:
        print(f"error: cli: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(RunConfig(
        inputs=args.inputs, output_dir=args.output_dir, ocr_tsv=args.ocr_tsv, ocr_cmd=args.ocr_cmd,
        use_ocr=not args.no_ocr, formats=args.format, debug_dir=args.debug_dir, jobs=args.jobs,
        pipeline=pipeline,
    ))


if __name__ == "__main__":
    sys.exit(main())
