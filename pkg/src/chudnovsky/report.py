"""Table rows, CSV emission and matplotlib figures for the reporting commands."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import theorem9_bound
from .reference import reference_count
from .strategy import DEFAULT_UMAX, Strategy, strategy_cost

CSV_HEADER = ["q", "n", "strategy", "count", "reference", "match"]


@dataclass(frozen=True)
class TableRow:
    q: int
    n: int
    strategy: str
    count: int
    reference: Optional[int]
    match: Optional[bool]

    @property
    def improvement(self) -> bool:
        return self.reference is not None and self.count < self.reference

    def csv_fields(self) -> list[str]:
        ref = "" if self.reference is None else str(self.reference)
        match = "" if self.match is None else str(self.match).lower()
        return [str(self.q), str(self.n), self.strategy, str(self.count), ref, match]


def table_rows(q: int, nmin: int, nmax: int, strategy="deg",
               umax: int = DEFAULT_UMAX) -> list[TableRow]:
    if not 2 <= nmin <= nmax:
        raise ValueError("need 2 <= nmin <= nmax")
    s = Strategy.parse(strategy).value
    rows = []
    for n in range(nmin, nmax + 1):
        count = strategy_cost(q, n, s, umax)
        ref, is_upper = reference_count(q, n, s)
        if ref is None:
            match = None
        else:
            match = count <= ref if is_upper else count == ref
        rows.append(TableRow(q, n, s, count, ref, match))
    return rows


def rows_to_csv(rows: Sequence[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


# ---------------------------------------------------------------------------
# figures

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _style(ax):
    from matplotlib.ticker import MaxNLocator
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.grid(True, alpha=0.3, linewidth=0.5)
    ax.tick_params(labelsize=9)


def plot_table(rows: Sequence[TableRow], path: str) -> None:
    """Counts against n, with reference values and the 2n-1 floor."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ns = [r.n for r in rows]
    ax.plot(ns, [2 * n - 1 for n in ns], color="0.6", linestyle="--", linewidth=1,
            label="2n - 1")
    ax.plot(ns, [r.count for r in rows], marker="o", markersize=4, linewidth=1.2,
            label=f"{rows[0].strategy} (q={rows[0].q})")
    refs = [(r.n, r.reference) for r in rows if r.reference is not None]
    if refs:
        ax.scatter(*zip(*refs), marker="x", color="black", s=24, zorder=3, label="reference")
    for r in rows:
        if r.improvement:
            ax.annotate(str(r.count), (r.n, r.count), textcoords="offset points",
                        xytext=(0, -12), ha="center", fontsize=7, color="tab:red")
    ax.set_xlabel("extension degree n")
    ax.set_ylabel("bilinear multiplications")
    ax.legend(frameon=False, fontsize=8)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bounds(q: int, nmax: int, path: str) -> None:
    """Computed counts between 2n-1 and the uniform upper bound, log scale."""
    plt = _pyplot()
    ns = list(range(2, nmax + 1))
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(ns, [theorem9_bound(q, n) for n in ns], drawstyle="steps-post",
            color="tab:red", linewidth=1.2, label="upper bound")
    for s in ("deg", "div", "opt"):
        pts = [(n, strategy_cost(q, n, s)) for n in ns if s != "div" or 2 * n > q + 2]
        if pts:
            ax.plot(*zip(*pts), linewidth=1.0, label=s)
    ax.plot(ns, [2 * n - 1 for n in ns], color="0.5", linestyle="--", linewidth=1,
            label="2n - 1")
    ax.set_yscale("log")
    ax.set_xlabel("extension degree n")
    ax.set_ylabel("bilinear multiplications")
    ax.set_title(f"q = {q}", fontsize=10)
    ax.legend(frameon=False, fontsize=8, ncol=2)
    _style(ax)
    top = max(theorem9_bound(q, n) for n in ns)
    ax.set_ylim(1, 10 ** math.ceil(math.log10(top) + 0.5))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
