"""Figure specs and rendering.

Everything here is read-render: the curves are whatever the CSVs say,
nothing is recomputed. Output is PNG via the Agg backend so a re-render
of the same inputs is byte-identical.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import MissingFile
from .schemas import load_events, load_trajectory

KINDS = ("norms", "inputs", "dwell")

MODES = ("open_loop", "ctc", "cetc", "petc", "stc")
MODE_LABELS = {
    "open_loop": "open loop",
    "ctc": "CTC",
    "cetc": "CETC",
    "petc": "PETC",
    "stc": "STC",
}
CONTROLLED = ("ctc", "cetc", "petc", "stc")
TRIGGERED = ("cetc", "petc", "stc")

DPI = 150
FIGSIZE = (7.0, 4.2)


@dataclass(frozen=True)
class FigureSpec:
    """One figure: labeled CSV series, a kind, and an output path."""

    kind: str
    series: tuple[tuple[str, str], ...]  # (legend label, csv path)
    out_path: str
    title: str = ""
    xlabel: str = "t [s]"
    ylabel: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.series:
            raise ValueError("series must not be empty")


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def _save(fig, out_path: str) -> str:
    parent = os.path.dirname(out_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    return out_path


def render(spec: FigureSpec) -> str:
    """Render one figure, returning the written image path."""
    fig, ax = _new_axes(spec)
    try:
        if spec.kind == "norms":
            for label, path in spec.series:
                data = load_trajectory(path)
                ax.semilogy(data["t"], data["norm_plant"], label=label, lw=1.2)
            ax.legend()
        elif spec.kind == "inputs":
            for label, path in spec.series:
                data = load_trajectory(path)
                ax.step(data["t"], data["U_held"], where="post", label=label, lw=1.0)
            ax.legend()
        else:  # dwell
            plotted = 0
            colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
            for i, (label, path) in enumerate(spec.series):
                data = load_events(path)
                keep = data["k"] >= 1  # k = 0 books the initial input, dwell 0
                t_k, dwell = data["t_k"][keep], data["dwell"][keep]
                color = colors[i % len(colors)]
                ax.vlines(t_k, 0.0, dwell, colors=color, lw=0.8, alpha=0.5)
                ax.plot(t_k, dwell, ls="none", marker="o", ms=3.5, color=color,
                        label=f"{label} ({t_k.size} events)")
                plotted += t_k.size
            if plotted:
                ax.legend()
            else:
                ax.text(0.5, 0.5, "no events", transform=ax.transAxes,
                        ha="center", va="center", fontsize=14, color="gray")
    except Exception:
        plt.close(fig)
        raise
    return _save(fig, spec.out_path)


def _series_for(results_dir: str, modes: tuple[str, ...], name: str) -> tuple[tuple[str, str], ...]:
    out = []
    for mode in modes:
        path = os.path.join(results_dir, mode, name)
        if os.path.isfile(path):
            out.append((MODE_LABELS[mode], path))
    return tuple(out)


def render_all(results_dir: str, out_dir: str) -> list[str]:
    """Render the standard figure set from a results tree.

    Looks for <results-dir>/<mode>/trajectory.csv and events.csv per mode
    and renders whichever of the four figures has at least one series:
    norm decay, held control inputs, CETC/PETC dwell-times, STC dwell-times.
    """
    if not os.path.isdir(results_dir):
        raise MissingFile(f"no such results directory: {results_dir}")
    specs = []
    norms = _series_for(results_dir, MODES, "trajectory.csv")
    if norms:
        specs.append(FigureSpec(
            kind="norms", series=norms,
            out_path=os.path.join(out_dir, "norms.png"),
            title="State norm", ylabel="||(u, v)||",
        ))
    inputs = _series_for(results_dir, CONTROLLED, "trajectory.csv")
    if inputs:
        specs.append(FigureSpec(
            kind="inputs", series=inputs,
            out_path=os.path.join(out_dir, "inputs.png"),
            title="Held control input", ylabel="U(t)",
        ))
    dwell_ep = _series_for(results_dir, ("cetc", "petc"), "events.csv")
    if dwell_ep:
        specs.append(FigureSpec(
            kind="dwell", series=dwell_ep,
            out_path=os.path.join(out_dir, "dwell_cetc_petc.png"),
            title="Inter-event times, CETC and PETC",
            xlabel="t_k [s]", ylabel="dwell [s]",
        ))
    dwell_stc = _series_for(results_dir, ("stc",), "events.csv")
    if dwell_stc:
        specs.append(FigureSpec(
            kind="dwell", series=dwell_stc,
            out_path=os.path.join(out_dir, "dwell_stc.png"),
            title="Inter-event times, STC",
            xlabel="t_k [s]", ylabel="dwell [s]",
        ))
    if not specs:
        raise MissingFile(f"no mode outputs found under {results_dir}")
    return [render(spec) for spec in specs]
