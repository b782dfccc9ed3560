"""Turn becback CSV series into the five standard figures.

The renderer performs no physics: every plotted number appears verbatim in an
input CSV.  Inputs are validated against their self-describing headers (all
files of a job must exist and carry the figure id being rendered), legend
entries come from the swept header value (ring size for the size sweeps,
switching time otherwise), and sweep order maps deterministically onto the
line-style cycle.  Figure 1 additionally carries an inset zooming the
smallest ring onto the early-time window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = ["FIGURE_IDS", "PlotJob", "ValidationError", "read_series",
           "build_figure", "render"]

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5")
_SIZE_SWEPT = ("fig1", "fig3")
_LINE_STYLES = ("solid", "dashed", "dashdot", "dotted")
_Y_LABELS = {
    "depletion": "quantum depletion",
    "power": "power transferred to the condensate",
    "total": "total fluctuation energy",
}
_X_LABEL = r"$t\ [1/\Delta\mu]$"
_INSET_WINDOW = 2.0


class ValidationError(ValueError):
    """Raised for missing or mismatched inputs; lists the offending files."""

    def __init__(self, message, files=()):
        self.files = tuple(str(f) for f in files)
        tail = f": {', '.join(self.files)}" if self.files else ""
        super().__init__(message + tail)


@dataclass(frozen=True)
class PlotJob:
    """One figure to render from a list of CSV inputs."""

    figure_id: str
    inputs: tuple
    output: Path
    png: bool = False
    styles: tuple = field(default=_LINE_STYLES)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValidationError(f"unknown figure id {self.figure_id!r}")


def read_series(path: Path):
    """Parse one becback CSV: returns (meta dict, t array, value array)."""
    meta = {}
    ts, vs = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# becback"):
            meta["generator"] = line[2:]
        elif line.startswith("# "):
            key, _, val = line[2:].partition("=")
            meta[key] = val
        elif line and line != "t,value":
            t, _, v = line.partition(",")
            ts.append(float(t))
            vs.append(float(v))
    return meta, np.asarray(ts), np.asarray(vs)


def _load_and_validate(job: PlotJob):
    if not job.inputs:
        raise ValidationError("no input files given")
    missing = [p for p in job.inputs if not Path(p).exists()]
    if missing:
        raise ValidationError("missing input files", missing)
    loaded = []
    mismatched = []
    for p in job.inputs:
        meta, ts, vs = read_series(p)
        if meta.get("figure") != job.figure_id:
            mismatched.append(p)
        loaded.append((meta, ts, vs))
    if mismatched:
        raise ValidationError(
            f"inputs do not carry figure id {job.figure_id!r}", mismatched)
    key = "ell" if job.figure_id in _SIZE_SWEPT else "tau_s"
    loaded.sort(key=lambda item: float(item[0][key]))
    return key, loaded


def _legend_label(key, meta):
    value = float(meta[key])
    symbol = r"\ell" if key == "ell" else r"\tau_s"
    return rf"${symbol} = {value:g}$"


def build_figure(job: PlotJob):
    """Assemble the matplotlib figure for a job (exposed for inspection)."""
    key, loaded = _load_and_validate(job)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for i, (meta, ts, vs) in enumerate(loaded):
        ax.plot(ts, vs, linestyle=job.styles[i % len(job.styles)],
                linewidth=1.4, label=_legend_label(key, meta))
    channel = loaded[0][0].get("channel", "value")
    ax.set_xlabel(_X_LABEL)
    ax.set_ylabel(_Y_LABELS.get(channel, channel))
    ax.legend(frameon=False)
    fig.tight_layout()  # before the inset, which tight_layout cannot place

    if job.figure_id == "fig1":
        # zoom the smallest ring onto the early-time window
        meta, ts, vs = loaded[0]
        inset = fig.add_axes((0.58, 0.24, 0.28, 0.26))
        window = ts <= _INSET_WINDOW
        inset.plot(ts[window], vs[window], linewidth=1.2)
        inset.set_title(_legend_label(key, meta), fontsize=8)
        inset.tick_params(labelsize=7)
    return fig


def render(job: PlotJob) -> Path:
    """Render the job to its output image (SVG by default, PNG on request)."""
    fig = build_figure(job)
    out = Path(job.output)
    try:
        fig.savefig(out, format="png" if job.png else "svg")
    finally:
        plt.close(fig)
    return out
