"""Adaptive vs global thresholding as the bottom-of-page gain drops."""
import argparse
from dataclasses import replace
from pathlib import Path

import numpy as np

from tablegrid import synth
from tablegrid.pipeline import PipelineConfig, extract_tables

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden.json"


def score(result, gt):
    hit = 0
    for grid, truth in zip(result.grids, gt.tables):
        for r, row in enumerate(truth.texts):
            for c, text in enumerate(row):
                hit += r < grid.n_rows and c < grid.n_cols and grid.cells[r][c] == text
    return hit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ink", type=int, default=40)
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args()
    specs, page = synth.load_fixture(FIXTURE)
    total = sum(t.shape[0] * t.shape[1] for t in synth.render(specs, page)[1].tables)
    print(f"{'bottom gain':>11}  {'adaptive':>9}  {'otsu':>9}  otsu t")
    for bottom in np.linspace(1.0, 0.2, args.steps):
        img, gt = synth.render(specs, replace(page, ink=args.ink, gradient=(1.0, float(bottom))))
        words = [wt.word for wt in gt.words]
        a = extract_tables(img, words)
        o = extract_tables(img, words, replace(PipelineConfig(), binarize_mode="otsu"))
        print(f"{bottom:11.2f}  {score(a, gt):>4}/{total:<4}  {score(o, gt):>4}/{total:<4}  {o.threshold}")


if __name__ == "__main__":
    main()
