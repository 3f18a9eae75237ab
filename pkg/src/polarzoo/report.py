"""Delimited text reports with a matplotlib figure beside them."""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (5.5, 3.4),
    "figure.dpi": 110,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
}


def block(title: str, rows: dict) -> str:
    lines = [f"=== {title} ==="]
    for k, v in rows.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True, default=str)
        lines.append(f"{k}: {v}")
    lines.append("=== end ===")
    return "\n".join(lines) + "\n"


def bar_figure(path, title: str, series: dict, xlabel: str = "", ylabel: str = "count", log: bool = False) -> Path:
    """Bar chart of {label: value}; several series given as {name: {label: value}}."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        nested = series and all(isinstance(v, dict) for v in series.values())
        groups = series if nested else {"": series}
        labels = sorted({str(k) for g in groups.values() for k in g}, key=_sort_key)
        width = 0.8 / max(1, len(groups))
        for t, (name, g) in enumerate(groups.items()):
            vals = [dict((str(k), v) for k, v in g.items()).get(x, 0) for x in labels]
            xs = [i + t * width - 0.4 + width / 2 for i in range(len(labels))]
            ax.bar(xs, vals, width=width, label=name or None)
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=45 if len(labels) > 8 else 0, ha="right" if len(labels) > 8 else "center")
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if log:
            ax.set_yscale("log")
        if nested and len(groups) > 1:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def spectrum_figure(path, title: str, eigenvalues, multiplicities) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.stem([int(e) for e in eigenvalues], [int(m) for m in multiplicities])
        ax.set_yscale("log")
        ax.set_title(title)
        ax.set_xlabel("eigenvalue")
        ax.set_ylabel("multiplicity")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def _sort_key(s: str):
    try:
        return (0, float(s), s)
    except ValueError:
        return (1, 0.0, s)
