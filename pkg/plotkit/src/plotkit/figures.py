"""The two figure styles: metric-vs-length lines with SD error bars,
and two-axis heatmaps with an optional threshold contour."""

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DataShapeError, SchemaError
from .io import group_value, read_sweep, select_metric

# stable ids inside the SVG so identical input renders identical bytes
matplotlib.rcParams["svg.hashsalt"] = "plotkit"

_LABEL_NAMES = {"N": "N", "alpha1": "α", "alpha2": "α₂"}


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    kind: str  # lines | heatmap
    metric: str
    out_path: str
    group: str = "scenario"
    level: float = None
    scenario: str = None  # heatmap filter when the CSV holds several
    title: str = None
    cmap: str = "viridis"
    capsize: float = 2.5
    marker: str = "o"
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in ("lines", "heatmap"):
            raise SchemaError(f"kind must be 'lines' or 'heatmap', got {self.kind!r}")


@dataclass(frozen=True)
class LinesData:
    """What actually got plotted, index-aligned with the CSV rows used."""

    labels: tuple
    x: tuple  # one array per curve, file order
    means: tuple
    sds: tuple


@dataclass(frozen=True)
class HeatmapData:
    l1: tuple
    l2: tuple
    grid: object  # 2d array, grid[j][i] at (l1[i], l2[j])
    contours: tuple = field(default=())  # (x, y) vertex arrays per contour path


def _fmt_value(v):
    return f"{v:g}" if isinstance(v, float) else str(v)


def _curve_label(column, value):
    name = _LABEL_NAMES.get(column)
    return f"{name}={_fmt_value(value)}" if name else str(value)


def build_lines(spec: PlotSpec):
    rows = select_metric(read_sweep(spec.csv_path), spec.metric)
    if any(r.is_bipartite for r in rows):
        raise DataShapeError("two-axis data; use kind=heatmap")
    groups = {}
    for r in rows:
        groups.setdefault(group_value(r, spec.group), []).append(r)

    labels, xs, means, sds = [], [], [], []
    for value in sorted(groups):
        curve = groups[value]
        labels.append(_curve_label(spec.group, value))
        xs.append(tuple(r.l1_km for r in curve))
        means.append(tuple(r.mean for r in curve))
        sds.append(tuple(r.sd for r in curve))
    return LinesData(tuple(labels), tuple(xs), tuple(means), tuple(sds))


def _render_lines(data: LinesData, spec: PlotSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, x, mean, sd in zip(data.labels, data.x, data.means, data.sds):
        ax.errorbar(
            x,
            mean,
            yerr=sd,
            label=label,
            marker=spec.marker,
            markersize=3.5,
            linewidth=1.4,
            capsize=spec.capsize,
        )
    ax.set_xlabel("L (km)")
    ax.set_ylabel(spec.metric)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def _pivot(rows, spec):
    scenarios = sorted({r.scenario for r in rows})
    if spec.scenario is not None:
        rows = [r for r in rows if r.scenario == spec.scenario]
        if not rows:
            raise SchemaError(
                f"scenario {spec.scenario!r} not in file; present: {', '.join(scenarios)}"
            )
    elif len(scenarios) > 1:
        raise DataShapeError(
            f"several scenarios in file ({', '.join(scenarios)}); pass one to plot"
        )
    if any(not r.is_bipartite for r in rows):
        raise DataShapeError("single-axis data; use kind=lines")

    l1 = tuple(sorted({r.l1_km for r in rows}))
    l2 = tuple(sorted({r.l2_km for r in rows}))
    index1 = {v: i for i, v in enumerate(l1)}
    index2 = {v: j for j, v in enumerate(l2)}
    grid = np.full((len(l2), len(l1)), np.nan)
    for r in rows:
        i, j = index1[r.l1_km], index2[r.l2_km]
        if not np.isnan(grid[j, i]):
            raise DataShapeError(f"duplicate cell at ({r.l1_km}, {r.l2_km})")
        grid[j, i] = r.mean
    if np.isnan(grid).any():
        raise DataShapeError(
            f"incomplete grid: {int(np.isnan(grid).sum())} of {grid.size} cells missing"
        )
    return l1, l2, grid


def build_heatmap(spec: PlotSpec):
    rows = select_metric(read_sweep(spec.csv_path), spec.metric)
    l1, l2, grid = _pivot(rows, spec)
    contours = ()
    if spec.level is not None:
        # the one interpolation this tool performs: matplotlib's linear
        # level-crossing contour between grid nodes
        fig = plt.figure()
        try:
            cs = plt.contour(l1, l2, grid, levels=[spec.level])
            contours = tuple(
                (tuple(path.vertices[:, 0]), tuple(path.vertices[:, 1]))
                for path in cs.get_paths()
                if len(path.vertices)
            )
        finally:
            plt.close(fig)
    return HeatmapData(l1, l2, grid, contours)


def _render_heatmap(data: HeatmapData, spec: PlotSpec):
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    mesh = ax.pcolormesh(data.l1, data.l2, data.grid, cmap=spec.cmap, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=spec.metric)
    if spec.level is not None:
        ax.contour(
            data.l1,
            data.l2,
            data.grid,
            levels=[spec.level],
            colors="white",
            linewidths=1.6,
        )
    ax.set_xlabel("L₁ (km)")
    ax.set_ylabel("L₂ (km)")
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def _save(fig, spec: PlotSpec):
    try:
        if str(spec.out_path).endswith(".svg"):
            fig.savefig(spec.out_path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(spec.out_path, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.out_path


def plot_lines(spec: PlotSpec):
    """Render and save; returns the output path. Data errors raise before
    any file is written."""
    return _save(_render_lines(build_lines(spec), spec), spec)


def plot_heatmap(spec: PlotSpec):
    return _save(_render_heatmap(build_heatmap(spec), spec), spec)
