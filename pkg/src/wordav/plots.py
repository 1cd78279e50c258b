"""Figure and CSV rendering for reports.

Every writer takes a directory, writes files with deterministic names
derived from a stem, and returns the written paths. Figures use the
non-interactive Agg backend so rendering works without a display.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _slug(text: str) -> str:
    """Filesystem-safe stem fragment: lowercase, runs of other chars -> '-'."""
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-") or "item"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def write_enumeration_outputs(report, directory, stem: str = "free-words") -> list[Path]:
    """Counts-per-length table and curve for an enumeration report."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lengths = list(range(len(report.counts)))
    written = [
        _write_csv(
            directory / f"{stem}.csv",
            ["length", "count"],
            [[n, c] for n, c in zip(lengths, report.counts)],
        )
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lengths, report.counts, marker=".", linewidth=1)
    if max(report.counts) > 0:
        ax.set_yscale("symlog")
    ax.set_xlabel("length")
    ax.set_ylabel("words")
    ax.set_title(f"{report.spec}-free words over {report.alphabet_size} letters")
    ax.grid(True, alpha=0.3)
    written.append(_save(fig, directory / f"{stem}.png"))
    return written


def write_backtrack_outputs(report, directory, stem: str = "backtrack") -> list[Path]:
    """Longest-found progression for a backtracking search."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = [[nodes, length] for nodes, length in report.milestones]
    written = [_write_csv(directory / f"{stem}.csv", ["nodes", "longest_length"], rows)]
    fig, ax = plt.subplots(figsize=(6, 4))
    if rows:
        xs = [r[0] for r in rows]
        ys = [r[1] for r in rows]
        ax.step(xs, ys, where="post", marker=".")
        if xs[-1] > 100:
            ax.set_xscale("log")
    ax.axhline(report.cap, linestyle="--", linewidth=1, alpha=0.6)
    ax.set_xlabel("nodes explored")
    ax.set_ylabel("longest word found")
    ax.set_title(f"{report.formula} over {report.alphabet_size} letters ({report.outcome})")
    ax.grid(True, alpha=0.3)
    written.append(_save(fig, directory / f"{stem}.png"))
    return written


def write_check_outputs(report, directory, stem: str = "report") -> list[Path]:
    """Component table, verdict chart, and any per-check count curves."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    parts = list(report.components) or [report]
    rows = [
        [c.name, c.verdict, len(c.witnesses), len(c.components)]
        for c in parts
    ]
    written = [
        _write_csv(
            directory / f"{stem}-components.csv",
            ["check", "verdict", "witnesses", "subchecks"],
            rows,
        )
    ]

    order = ["pass", "fail", "inconclusive"]
    totals = {v: sum(1 for c in parts if c.verdict == v) for v in order}
    colors = {"pass": "#2a9d2a", "fail": "#cc3333", "inconclusive": "#e0a020"}
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.bar(order, [totals[v] for v in order], color=[colors[v] for v in order])
    ax.set_ylabel("checks")
    ax.set_title(f"{report.name}: {report.verdict}")
    for i, v in enumerate(order):
        ax.text(i, totals[v], str(totals[v]), ha="center", va="bottom")
    written.append(_save(fig, directory / f"{stem}-verdicts.png"))

    for c in parts:
        counts = c.stats.get("counts")
        if not counts:
            continue
        sub = _slug(c.name)
        written.extend(
            _write_counts_curve(
                counts, directory, f"{stem}-{sub}", title=c.name
            )
        )
    return written


def _write_counts_curve(counts, directory: Path, stem: str, title: str) -> list[Path]:
    lengths = list(range(len(counts)))
    written = [
        _write_csv(
            directory / f"{stem}.csv",
            ["length", "count"],
            [[n, c] for n, c in zip(lengths, counts)],
        )
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lengths, counts, marker=".", linewidth=1)
    if max(counts) > 0:
        ax.set_yscale("symlog")
    ax.set_xlabel("length")
    ax.set_ylabel("words")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    written.append(_save(fig, directory / f"{stem}.png"))
    return written
