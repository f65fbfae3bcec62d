#!/usr/bin/env python3
"""Render `msrcgr plotdata` output as trajectory and feature-vector images.

    msrcgr plotdata --sequence ATCGATCGTAGC --out plot.json
    python3 docs/plot_trajectories.py plot.json --out-dir figures

Writes one image per scale (trajectory_k<k>.png), a 2x2 panel of all scales
(trajectories.png) and a bar chart of the 24-dimensional descriptor
(features.png) when the export contains one.
"""

import argparse
import json
import math
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

DNA_COLOURS = {"A": "tab:red", "T": "tab:blue", "G": "tab:green", "C": "tab:orange"}


def exact_points(trajectory):
    return [(float(Fraction(x)), float(Fraction(y))) for x, y in trajectory["points"]]


def token_colour(token, kind):
    if kind == "DNA" and token[-1] in DNA_COLOURS:
        return DNA_COLOURS[token[-1]]
    return plt.cm.tab20(hash(token[-1]) % 20)


def draw_scale(ax, entry, kind):
    traj = entry["trajectory"]
    points = exact_points(traj)
    tokens = traj["tokens"]
    steps = len(points) - 1

    circle = plt.Circle((0, 0), 1.0, fill=False, linestyle=":", linewidth=0.8, color="grey")
    ax.add_patch(circle)

    # Corner c_{sigma(w_t)} is recovered as 2 p_t - p_{t-1}; mark the visited ones.
    seen = {}
    for t in range(1, steps + 1):
        cx = 2 * points[t][0] - points[t - 1][0]
        cy = 2 * points[t][1] - points[t - 1][1]
        seen.setdefault(tokens[t - 1], (cx, cy))
    for token, (cx, cy) in seen.items():
        ax.scatter([cx], [cy], s=60, marker="s", color=token_colour(token, kind), zorder=3)
        ax.annotate(token, (cx, cy), textcoords="offset points", xytext=(6, 6), fontsize=8)

    # Edge opacity encodes temporal order.
    for t in range(1, steps + 1):
        alpha = 0.15 + 0.85 * t / steps
        (x0, y0), (x1, y1) = points[t - 1], points[t]
        ax.plot([x0, x1], [y0, y1], color="black", alpha=alpha, linewidth=1.0)
        ax.scatter([x1], [y1], s=18, color=token_colour(tokens[t - 1], kind), alpha=alpha, zorder=4)

    ax.scatter([0], [0], s=40, marker="o", facecolors="white", edgecolors="black", zorder=5, label="origin")
    ax.scatter([points[-1][0]], [points[-1][1]], s=160, marker="*", color="gold", edgecolors="black", zorder=6,
               label="final position")
    ax.set_title(f"scale k={traj['scale']}  ({steps} points)")
    ax.set_xlim(-1.15, 1.15)
    ax.set_ylim(-1.15, 1.15)
    ax.set_aspect("equal")
    ax.grid(True, linewidth=0.3)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("input", help="JSON written by `msrcgr plotdata`")
    parser.add_argument("--out-dir", default="figures")
    args = parser.parse_args()

    doc = json.loads(Path(args.input).read_text())
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    kind = doc["kind"]
    entries = doc["trajectories"]

    for entry in entries:
        fig, ax = plt.subplots(figsize=(5, 5))
        draw_scale(ax, entry, kind)
        ax.legend(loc="lower left", fontsize=7)
        fig.suptitle(doc["sequence"])
        fig.tight_layout()
        fig.savefig(out / f"trajectory_k{entry['scale']}.png", dpi=150)
        plt.close(fig)

    cols = 2 if len(entries) > 1 else 1
    rows = math.ceil(len(entries) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(5 * cols, 5 * rows), squeeze=False)
    for ax, entry in zip(axes.flat, entries):
        draw_scale(ax, entry, kind)
    for ax in list(axes.flat)[len(entries):]:
        ax.axis("off")
    fig.suptitle(doc["sequence"])
    fig.tight_layout()
    fig.savefig(out / "trajectories.png", dpi=150)
    plt.close(fig)

    features = doc.get("features")
    if features:
        fig, ax = plt.subplots(figsize=(10, 4))
        colours = [plt.cm.tab10(i // 6) for i in range(len(features["values"]))]
        ax.bar(range(len(features["values"])), features["values"], color=colours)
        ax.set_xticks(range(len(features["names"])))
        ax.set_xticklabels(features["names"], rotation=90, fontsize=8)
        ax.set_title(f"24-dimensional multi-scale descriptor of {doc['sequence']}")
        fig.tight_layout()
        fig.savefig(out / "features.png", dpi=150)
        plt.close(fig)

    print(f"wrote figures to {out}")


if __name__ == "__main__":
    main()
