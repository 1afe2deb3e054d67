"""Matplotlib figures for ranking reports.

Figures are rendered straight to files through the object-oriented API (no
pyplot, no global state), so rendering stays usable from any thread and
never requires a display.
"""

from __future__ import annotations

from typing import Iterable

from .catalog import CHARACTERISTIC_LABELS, format_characteristic


def render_ranking_figure(assessments: Iterable, path: str, title: str | None = None) -> None:
    """Horizontal bar chart of the ranked characteristic, one bar per variant.

    Loss-of-traction reports draw the targeted axle's friction-circle
    utilization with a line at 1 (the traction limit). Acceleration reports
    stack the front and rear potential components. The image format follows
    the file extension (png, svg, pdf).
    """
    from matplotlib.figure import Figure  # deferred: pulling in matplotlib is slow

    assessments = list(assessments)
    if not assessments:
        raise ValueError("cannot render an empty ranking")
    kind = assessments[0].use_case_kind.value
    label = CHARACTERISTIC_LABELS[kind]
    names = [a.variant_name for a in assessments]
    positions = range(len(assessments) - 1, -1, -1)  # first row on top

    fig = Figure(figsize=(9, 0.45 * len(assessments) + 1.6))
    ax = fig.subplots()
    if kind == "no-loss":
        front = [a.detail.p_acc_fa for a in assessments]
        rear = [a.detail.p_acc_ra for a in assessments]
        ax.barh(positions, front, color="#3d6fb4", label="front axle")
        ax.barh(positions, rear, left=front, color="#c56a3d", label="rear axle")
        ax.legend(loc="lower right", frameon=False)
        totals = [a.characteristic_value for a in assessments]
    else:
        totals = [a.characteristic_value for a in assessments]
        ax.barh(positions, totals, color="#3d6fb4")
        ax.axvline(1.0, color="#888888", linewidth=1, linestyle="--")
    for y, value in zip(positions, totals):
        ax.annotate(
            format_characteristic(value),
            (value, y),
            xytext=(4, 0),
            textcoords="offset points",
            va="center",
            fontsize=8,
        )
    ax.set_yticks(list(positions))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xlabel(label)
    ax.set_title(title or f"{kind}: {label} per variant")
    ax.margins(x=0.12)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
