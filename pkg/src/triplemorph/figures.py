"""Matplotlib rendering of validation reports.

Renders a bar chart of violations per constraint id (grouped by phase) to
an image file, as a companion to the line-oriented report output.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .validate import ValidationReport

_PHASE_COLORS = {"source": "#4878d0", "target": "#ee854a", "cross": "#6acc64"}


def save_violation_chart(reports: Sequence[ValidationReport], path: str) -> None:
    """Write a violations-per-constraint bar chart covering all reports."""
    fig, ax = plt.subplots(figsize=(9, 3.5))
    ids = []
    counts = []
    colors = []
    for report in reports:
        per_id = {cid: 0 for cid in report.checked}
        for v in report.violations:
            per_id[v.constraint_id] = per_id.get(v.constraint_id, 0) + 1
        for cid in report.checked:
            ids.append(cid)
            counts.append(per_id[cid])
            colors.append(_PHASE_COLORS.get(report.phase, "#888888"))

    positions = range(len(ids))
    ax.bar(positions, counts, color=colors)
    ax.set_xticks(list(positions))
    ax.set_xticklabels([str(i) for i in ids], fontsize=7)
    ax.set_xlabel("constraint id")
    ax.set_ylabel("violations")
    ax.yaxis.get_major_locator().set_params(integer=True)
    total = sum(counts)
    phases = ", ".join(r.phase for r in reports)
    ax.set_title(f"Validation ({phases}): {total} violation(s)")
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=_PHASE_COLORS[r.phase])
        for r in reports
        if r.phase in _PHASE_COLORS
    ]
    if handles:
        ax.legend(handles, [r.phase for r in reports], fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
