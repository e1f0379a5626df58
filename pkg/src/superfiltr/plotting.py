"""Heatmaps of scan results: one panel per (shape, p), rows are kind/mode,
columns are k."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

# 0 agree/no, 1 agree/yes, 2 computed yes but predicted no, 3 computed no but predicted yes
_COLORS = ["#d9d9d9", "#4c72b0", "#dd8452", "#c44e52"]
_LABELS = ["no (agree)", "yes (agree)", "yes, predicted no", "no, predicted yes"]


def _cell(row) -> int:
    if row["agree"]:
        return int(row["computed"])
    return 2 if row["computed"] else 3


def scan_heatmap(rows, path, title: str | None = None):
    """Write a figure summarizing ``rows`` (dicts from ``cli.run_scan``)."""
    panels: dict = {}
    for row in rows:
        panels.setdefault((row["m"], row["n"], row["p"]), []).append(row)
    keys = sorted(panels)
    ks = sorted({row["k"] for row in rows})
    height = 1.0 + 1.2 * len(keys)
    fig, axes = plt.subplots(len(keys), 1, figsize=(max(4.0, 0.45 * len(ks) + 2.5), height), squeeze=False)
    cmap = ListedColormap(_COLORS)
    for ax, key in zip(axes[:, 0], keys):
        series = sorted({(r["kind"], r["mode"]) for r in panels[key]})
        grid = [[float("nan")] * len(ks) for _ in series]
        for r in panels[key]:
            grid[series.index((r["kind"], r["mode"]))][ks.index(r["k"])] = _cell(r)
        ax.imshow(grid, cmap=cmap, vmin=-0.5, vmax=3.5, aspect="auto")
        ax.set_yticks(range(len(series)))
        ax.set_yticklabels([f"{kind[:3]}/{mode}" for kind, mode in series], fontsize=8)
        ax.set_xticks(range(len(ks)))
        ax.set_xticklabels(ks, fontsize=8)
        m, n, p = key
        ax.set_title(f"GL({m}|{n}), p={p}", fontsize=9)
    axes[-1, 0].set_xlabel("k")
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in _COLORS]
    fig.legend(handles, _LABELS, loc="lower center", ncol=2, fontsize=7, frameon=False)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout(rect=(0, 0.45 / height, 1, 1))
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
