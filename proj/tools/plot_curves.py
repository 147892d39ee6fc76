#!/usr/bin/env python3
"""Plot every x,y,ci_lo,ci_hi CSV of an output directory into one PNG per file prefix."""
import argparse
import csv
import pathlib
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_curve(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows or "ci_lo" not in rows[0]:
        return None
    cols = {k: [float(r[k]) for r in rows] for k in ("x", "y", "ci_lo", "ci_hi")}
    return cols


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("directory")
    args = ap.parse_args()
    root = pathlib.Path(args.directory)
    groups = defaultdict(list)
    for p in sorted(root.glob("*.csv")):
        c = read_curve(p)
        if c is None:
            continue
        key = "pd" if "swerling" in p.stem else "pdf"
        groups[key].append((p.stem, c))
    for key, curves in groups.items():
        fig, ax = plt.subplots(figsize=(7, 5))
        for name, c in curves:
            style = "--" if "theory" in name else "-"
            ax.plot(c["x"], c["y"], style, label=name, linewidth=1)
            if "theory" not in name:
                ax.fill_between(c["x"], c["ci_lo"], c["ci_hi"], alpha=0.2)
        ax.set_xlabel("SCNR (dB)" if key == "pd" else "statistic")
        ax.set_ylabel("P_d" if key == "pd" else "density")
        ax.legend(fontsize=6)
        fig.tight_layout()
        fig.savefig(root / f"{key}.png", dpi=150)


if __name__ == "__main__":
    main()
