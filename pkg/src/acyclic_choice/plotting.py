"""Figures for ``bench`` reports.  Always renders off-screen."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}

MARKERS = "os^Dv<>P"


def _family(name: str) -> str:
    return name.split("-")[0]


def _by_family(rows: Sequence[dict]) -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {}
    for r in rows:
        out.setdefault(_family(r["name"]), []).append(r)
    return dict(sorted(out.items()))


def colors_vs_degree(rows: Sequence[dict], path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.4))
        for (fam, rs), mk in zip(_by_family(rows).items(), MARKERS):
            ax.scatter([r["max_degree"] for r in rs], [r["colors_used"] for r in rs], s=12, marker=mk, label=fam)
        top = max((r["max_degree"] for r in rows), default=1)
        xs = [0, top]
        ax.plot(xs, [3 * x + 70 for x in xs], "k-", lw=1, label=r"list size $3\Delta+70$")
        ax.plot(xs, [x + 2 for x in xs], "k--", lw=1, label=r"$\Delta+2$")
        ax.set_xlabel(r"maximum degree $\Delta$")
        ax.set_ylabel("colors used")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def runtime_vs_edges(rows: Sequence[dict], path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.4))
        for (fam, rs), mk in zip(_by_family(rows).items(), MARKERS):
            ax.scatter([r["m"] for r in rs], [r["color_ms"] for r in rs], s=12, marker=mk, label=fam)
        ax.set_xlabel("edges")
        ax.set_ylabel("coloring time (ms)")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_bench(rows: Sequence[dict], out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    ok = [r for r in rows if r["outcome"] == "ok"]
    return [
        colors_vs_degree(ok, out_dir / "colors_vs_degree.png"),
        runtime_vs_edges(ok, out_dir / "runtime_vs_edges.png"),
    ]
