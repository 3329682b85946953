"""Deterministic SVG rendering of deformation-scan support trajectories.

One polyline per tracked support point across samples; tracks that merge
get a hollow square marker at the merge cell.  Rendering is pinned for
byte-identical output across runs: fixed hash salt, no date metadata, and
all inputs exact rationals converted once.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .families import FamilyScanReport, Trajectory  # noqa: E402

_SVG_RC = {
    "svg.hashsalt": "azcurve",
    "figure.dpi": 100,
    "font.size": 9,
}


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _build_tracks(per_sample: list) -> tuple[list[dict], list[tuple[int, Fraction]]]:
    """Greedy nearest-value tracking of finite rational support points
    across samples; returns (tracks, merge markers)."""
    tracks: list[dict] = []
    active: list[Optional[int]] = []  # track index by position, or closed
    merges: list[tuple[int, Fraction]] = []
    for i, cell in enumerate(per_sample):
        if cell is None:
            active = []
            continue
        values = [p.value for p in cell if p.value is not None]
        if not values:
            active = []
            continue
        if not active:
            for v in values:
                tracks.append({"xs": [i], "ys": [v]})
                active.append(len(tracks) - 1)
            continue
        # assign each active track to the nearest value
        assignment: dict[int, list[int]] = {vi: [] for vi in range(len(values))}
        for tidx in active:
            last = tracks[tidx]["ys"][-1]
            best = min(range(len(values)), key=lambda vi: (abs(values[vi] - last), vi))
            assignment[best].append(tidx)
        new_active: list[int] = []
        for vi, v in enumerate(values):
            takers = assignment[vi]
            if not takers:
                tracks.append({"xs": [i], "ys": [v]})
                new_active.append(len(tracks) - 1)
                continue
            for tidx in takers:
                tracks[tidx]["xs"].append(i)
                tracks[tidx]["ys"].append(v)
            if len(takers) > 1:
                merges.append((i, v))
            new_active.append(takers[0])
        active = new_active
    return tracks, merges


def emit_svg_scan(report: FamilyScanReport, path: str) -> None:
    """Render the trajectory table of a deformation scan to an SVG file."""
    with plt.rc_context(_SVG_RC):
        groups = [t for t in report.trajectories]
        drawable = [g for g in groups if any(c for c in g.per_sample if c)]
        n = max(len(drawable), 1)
        fig, axes = plt.subplots(n, 1, figsize=(6.4, 2.6 * n), squeeze=False)
        sample_labels = [_frac(s.sample) for s in report.samples]
        if not drawable:
            ax = axes[0][0]
            ax.set_axis_off()
            ax.text(0.5, 0.5, "no data", ha="center", va="center", fontsize=14)
        else:
            for ax_row, group in zip(axes, drawable):
                ax = ax_row[0]
                tracks, merges = _build_tracks(group.per_sample)
                for tr in tracks:
                    ax.plot(
                        tr["xs"],
                        [float(y) for y in tr["ys"]],
                        marker="o",
                        markersize=4,
                        linewidth=1.4,
                    )
                if merges:
                    ax.scatter(
                        [m[0] for m in merges],
                        [float(m[1]) for m in merges],
                        marker="s",
                        s=90,
                        facecolors="none",
                        edgecolors="black",
                        linewidths=1.4,
                        zorder=5,
                    )
                dropped = sum(
                    1
                    for cell in group.per_sample
                    if cell
                    for p in cell
                    if p.value is None
                )
                title = f"{group.component}, t = {_frac(group.grid_value)}"
                if dropped:
                    title += f"  ({dropped} non-rational or infinite points not drawn)"
                ax.set_title(title)
                ax.set_xticks(range(len(sample_labels)))
                ax.set_xticklabels(sample_labels)
                ax.set_xlabel("deformation sample")
                ax.set_ylabel("support coordinate")
                ax.grid(True, linewidth=0.4, alpha=0.5)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
