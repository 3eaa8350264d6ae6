"""Grouping accuracy over randomized multi-table layouts.

Prints one line per failing layout with the line widths involved, then the
overall exact-match rate.
"""
import argparse

from tablegrid import synth
from tablegrid.pipeline import PipelineConfig, extract_tables


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--min-cell-area", type=int, default=64)
    ap.add_argument("--kernel-divisor", type=int, default=80)
    args = ap.parse_args()
    cfg = PipelineConfig(min_cell_area=args.min_cell_area, kernel_divisor=args.kernel_divisor)

    exact = 0
    for seed in range(args.seeds):
        specs, page = synth.random_layout(seed)
        img, gt = synth.render(specs, page)
        res = extract_tables(img, None, cfg)
        got = sorted((g.outline.y_min, g.outline.x_min, len(g.cells)) for g in res.groups)
        want = sorted((t.outline.y_min, t.outline.x_min, t.shape[0] * t.shape[1]) for t in gt.tables)
        if got == want:
            exact += 1
        else:
            print(f"seed {seed}: want {want} got {got} line widths {[s.line_width for s in specs]}")
    print(f"{exact}/{args.seeds} exact ({exact / args.seeds:.1%})")


if __name__ == "__main__":
    main()
