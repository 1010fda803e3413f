"""Sweep orchestration: states through channel, estimator and metrics
over fiber-length grids, with deterministic parallel scheduling and CSV
persistence."""

import configparser
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .channel import FiberSpec, RngStream, draw_measured_counts
from .errors import ConfigError, InvalidArgumentError
from .estimator import ReconstructionOptions, reconstruct
from .kernels import BACKEND
from .metrics import concurrence, fidelity, negativity
from .povm import product_povm, sic_povm
from .states import sample_by_name

CSV_HEADER = "scenario,system,N,alpha1,alpha2,L1_km,L2_km,metric,mean,sd,n,converged_fraction,seed"

_SINGLE_SYSTEMS = ("qubit", "qutrit")
_BIPARTITE_SYSTEMS = ("two_qubit", "two_qutrit")
_DEFAULT_SAMPLES = {
    "qubit": "qubit_fibonacci_220",
    "qutrit": "qutrit_grid_5184",
    "two_qubit": "phi_family_100",
    "two_qutrit": "theta_family_100",
}
_METRICS_BY_SYSTEM = {
    "qubit": ("fidelity",),
    "qutrit": ("fidelity",),
    "two_qubit": ("fidelity", "concurrence", "negativity"),
    "two_qutrit": ("fidelity", "negativity"),
}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    system: str
    produced_per_measurement: int
    alpha: float
    lengths: tuple
    alpha2: float = None
    lengths2: tuple = None
    sample: str = None
    sample_limit: int = None
    sample_stride: int = 1
    metrics: tuple = ("fidelity",)
    seed: int = 0
    options: ReconstructionOptions = field(default_factory=ReconstructionOptions)
    attenuation_base: str = "e"
    transmission_mode: str = "per_setting"
    renormalize_counts: bool = False
    noise_mode: str = "stochastic"
    variant_index: int = 0

    def __post_init__(self):
        if self.system not in _SINGLE_SYSTEMS + _BIPARTITE_SYSTEMS:
            raise ConfigError(f"unknown system {self.system!r}")
        if self.produced_per_measurement < 0:
            raise ConfigError("produced_per_measurement must be >= 0")
        _check_grid(self.lengths)
        if self.is_bipartite:
            object.__setattr__(
                self, "alpha2", self.alpha if self.alpha2 is None else self.alpha2
            )
            object.__setattr__(
                self, "lengths2", self.lengths if self.lengths2 is None else self.lengths2
            )
            _check_grid(self.lengths2)
        elif self.alpha2 is not None or self.lengths2 is not None:
            raise ConfigError(f"system {self.system} takes a single fiber")
        if self.sample is None:
            object.__setattr__(self, "sample", _DEFAULT_SAMPLES[self.system])
        for m in self.metrics:
            if m not in _METRICS_BY_SYSTEM[self.system]:
                raise ConfigError(f"metric {m!r} not available for {self.system}")
        if self.noise_mode not in ("stochastic", "deterministic"):
            raise ConfigError(f"unknown noise_mode {self.noise_mode!r}")

    @property
    def is_bipartite(self):
        return self.system in _BIPARTITE_SYSTEMS


def _check_grid(grid):
    if not grid:
        raise ConfigError("length grid must be non-empty")
    if any(l < 0 for l in grid):
        raise ConfigError("lengths must be non-negative")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("length grid must be strictly increasing")


@dataclass(frozen=True)
class SweepResult:
    axes: tuple  # 1 or 2 length tuples
    metrics: tuple
    cells: dict  # (i1,) or (i1, i2) -> {metric: (mean, sd)}
    n: int
    converged_fraction: dict  # same keys -> float


def _povm_for(system):
    if system == "qubit":
        return sic_povm(2)
    if system == "qutrit":
        return sic_povm(3)
    if system == "two_qubit":
        p = sic_povm(2)
        return product_povm(p, p)
    p = sic_povm(3)
    return product_povm(p, p)


def _sample_states(config):
    sample = sample_by_name(config.sample)
    states = sample.states[:: max(1, config.sample_stride)]
    if config.sample_limit is not None:
        states = states[: config.sample_limit]
    if not states:
        raise ConfigError("state sample is empty after stride/limit")
    return states


def _metric_values(config, psi, rho_hat):
    rho_in = np.outer(psi, psi.conj())
    out = {}
    for name in config.metrics:
        if name == "fidelity":
            out[name] = fidelity(rho_in, rho_hat).value
        elif name == "concurrence":
            out[name] = concurrence(rho_hat).value
        else:
            half = int(round(math.sqrt(rho_hat.shape[0])))
            out[name] = negativity(rho_hat, half, half).value
    return out


def _run_sweep(config: ScenarioConfig, threads=1):
    povm = _povm_for(config.system)
    states = _sample_states(config)
    rhos = [np.outer(s, s.conj()) for s in states]
    axes = (config.lengths, config.lengths2) if config.is_bipartite else (config.lengths,)
    root = RngStream(config.seed)

    cell_keys = []
    if config.is_bipartite:
        for i1 in range(len(axes[0])):
            for i2 in range(len(axes[1])):
                cell_keys.append((i1, i2))
    else:
        cell_keys = [(i1,) for i1 in range(len(axes[0]))]

    def fibers_for(key):
        if config.is_bipartite:
            return [
                FiberSpec(config.alpha, axes[0][key[0]]),
                FiberSpec(config.alpha2, axes[1][key[1]]),
            ]
        return [FiberSpec(config.alpha, axes[0][key[0]])]

    def run_unit(key, s_idx):
        i2 = key[1] if config.is_bipartite else 0
        unit = root.child(config.variant_index, key[0], i2, s_idx)
        m = draw_measured_counts(
            rhos[s_idx],
            povm,
            config.produced_per_measurement,
            fibers_for(key),
            unit.child(0),
            base=config.attenuation_base,
            transmission_mode=config.transmission_mode,
            deterministic=config.noise_mode == "deterministic",
        )
        n_model = int(m.sum()) if config.renormalize_counts else config.produced_per_measurement
        starts = (
            unit.child(1)
            .generator()
            .uniform(-1.0, 1.0, size=(config.options.restarts, povm.dim * povm.dim))
        )
        res = reconstruct(m, povm, n_model, config.options, starts=starts)
        return _metric_values(config, states[s_idx], res.rho_hat), res.converged

    units = [(key, s) for key in cell_keys for s in range(len(states))]
    slots = [None] * len(units)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, out in enumerate(pool.map(lambda u: run_unit(*u), units)):
                slots[i] = out
    else:
        for i, u in enumerate(units):
            slots[i] = run_unit(*u)

    cells = {}
    converged = {}
    n_states = len(states)
    for c_idx, key in enumerate(cell_keys):
        block = slots[c_idx * n_states : (c_idx + 1) * n_states]
        per_metric = {}
        for name in config.metrics:
            vals = np.array([b[0][name] for b in block])
            sd = float(vals.std(ddof=1)) if n_states > 1 else 0.0
            per_metric[name] = (float(vals.mean()), sd)
        cells[key] = per_metric
        converged[key] = float(np.mean([1.0 if b[1] else 0.0 for b in block]))
    return SweepResult(
        axes=axes,
        metrics=tuple(config.metrics),
        cells=cells,
        n=n_states,
        converged_fraction=converged,
    )


def run_single_sweep(config: ScenarioConfig, threads=1):
    if config.is_bipartite:
        raise InvalidArgumentError("single sweep requires a qubit or qutrit system")
    return _run_sweep(config, threads)


def run_bipartite_sweep(config: ScenarioConfig, threads=1):
    if not config.is_bipartite:
        raise InvalidArgumentError("bipartite sweep requires a two_* system")
    return _run_sweep(config, threads)


def run_sweep(config: ScenarioConfig, threads=1):
    return _run_sweep(config, threads)


def threshold_contour(result: SweepResult, metric, level):
    """Neighbor pairs whose means straddle `level`, with the linearly
    interpolated crossing point for each pair."""
    if len(result.axes) != 2:
        raise InvalidArgumentError("contour extraction needs a 2-axis sweep")
    if metric not in result.metrics:
        raise InvalidArgumentError(f"metric {metric!r} not present in this sweep")
    ax1, ax2 = result.axes
    means = {k: result.cells[k][metric][0] for k in result.cells}
    crossings = []

    def check(a, b):
        fa = means[a] - level
        fb = means[b] - level
        if fa == 0.0 and fb == 0.0:
            return
        if fa * fb > 0.0:
            return
        if fa == fb:
            return
        t = fa / (fa - fb)
        pa = (ax1[a[0]], ax2[a[1]])
        pb = (ax1[b[0]], ax2[b[1]])
        point = (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))
        crossings.append((a, b, point))

    for i1 in range(len(ax1)):
        for i2 in range(len(ax2)):
            if i1 + 1 < len(ax1):
                check((i1, i2), (i1 + 1, i2))
            if i2 + 1 < len(ax2):
                check((i1, i2), (i1, i2 + 1))
    return crossings


def _fmt(x):
    return f"{x:.17g}"


def scenario_label(config: ScenarioConfig, multi_n=False, multi_alpha=False):
    label = config.name
    if multi_n:
        label += f"-N{config.produced_per_measurement}"
    if multi_alpha:
        label += f"-a{config.alpha:g}"
    return label


def iter_rows(result: SweepResult, config: ScenarioConfig, label=None):
    """CSV rows (no header), grid scan order, metrics inner."""
    label = label or config.name
    bip = len(result.axes) == 2
    for key in sorted(result.cells):
        l1 = result.axes[0][key[0]]
        l2 = result.axes[1][key[1]] if bip else None
        for metric in result.metrics:
            mean, sd = result.cells[key][metric]
            yield ",".join(
                [
                    label,
                    config.system,
                    str(config.produced_per_measurement),
                    _fmt(config.alpha),
                    _fmt(config.alpha2) if bip else "",
                    _fmt(l1),
                    _fmt(l2) if bip else "",
                    metric,
                    _fmt(mean),
                    _fmt(sd),
                    str(result.n),
                    _fmt(result.converged_fraction[key]),
                    str(config.seed),
                ]
            )


def _sidecar_section(cp, section, config: ScenarioConfig):
    cp.add_section(section)
    put = lambda k, v: cp.set(section, k, str(v))
    put("name", config.name)
    put("system", config.system)
    put("produced_per_measurement", config.produced_per_measurement)
    put("alpha", _fmt(config.alpha))
    if config.is_bipartite:
        put("alpha2", _fmt(config.alpha2))
        put("lengths2", ", ".join(_fmt(l) for l in config.lengths2))
    put("lengths", ", ".join(_fmt(l) for l in config.lengths))
    put("sample", config.sample)
    if config.sample_limit is not None:
        put("sample_limit", config.sample_limit)
    if config.sample_stride != 1:
        put("sample_stride", config.sample_stride)
    put("metrics", ", ".join(config.metrics))
    put("seed", config.seed)
    put("attenuation_base", config.attenuation_base)
    put("transmission_mode", config.transmission_mode)
    put("renormalize_counts", str(config.renormalize_counts).lower())
    put("noise_mode", config.noise_mode)
    put("restarts", config.options.restarts)
    put("max_iterations", config.options.max_iterations)
    put("objective_tolerance", _fmt(config.options.objective_tolerance))
    put("parameter_tolerance", _fmt(config.options.parameter_tolerance))
    put("model_counts", config.options.model_counts)


def write_csv(path, labeled_runs):
    """labeled_runs: iterable of (label, config, result). One CSV plus a
    sidecar record of every resolved scenario, reproducible byte for byte."""
    labeled_runs = list(labeled_runs)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for label, config, result in labeled_runs:
            for row in iter_rows(result, config, label):
                fh.write(row + "\n")
    cp = configparser.ConfigParser()
    cp.add_section("run")
    cp.set("run", "version", __version__)
    cp.set("run", "backend", BACKEND)
    for label, config, _ in labeled_runs:
        _sidecar_section(cp, f"scenario:{label}", config)
    sidecar = str(path) + ".run.cfg"
    with open(sidecar, "w", encoding="utf-8", newline="\n") as fh:
        cp.write(fh)


def write_results(result: SweepResult, config: ScenarioConfig, path):
    """Single-scenario convenience wrapper around write_csv."""
    write_csv(path, [(config.name, config, result)])


def _parse_lengths(text):
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3:
            raise ConfigError(f"length range must be start:stop:step, got {text!r}")
        start, stop, step = parts
        if step <= 0:
            raise ConfigError("length step must be positive")
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(round(v, 9))
            v += step
        return tuple(out)
    return tuple(float(p) for p in text.split(","))


def _parse_list(text, conv):
    return tuple(conv(p.strip()) for p in text.split(",") if p.strip())


def load_scenarios(path, overrides=()):
    """Parse a scenario config file into one ScenarioConfig per variant.

    produced_per_measurement and alpha accept comma lists; the cross
    product becomes the variant list (fig1-style multi-curve files).
    Overrides are KEY=VALUE or section.KEY=VALUE strings applied before
    validation.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    if not cp.has_section("scenario"):
        raise ConfigError(f"{path}: missing [scenario] section")
    if not cp.has_section("estimator"):
        cp.add_section("estimator")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        if "." in key:
            section, key = key.split(".", 1)
            if not cp.has_section(section):
                raise ConfigError(f"override section {section!r} not in config")
            cp.set(section, key, value.strip())
        elif cp.has_option("estimator", key) or key in (
            "restarts",
            "max_iterations",
            "objective_tolerance",
            "parameter_tolerance",
            "model_counts",
        ):
            cp.set("estimator", key, value.strip())
        else:
            cp.set("scenario", key, value.strip())

    sc = cp["scenario"]
    est = cp["estimator"]
    try:
        options = ReconstructionOptions(
            restarts=est.getint("restarts", ReconstructionOptions.restarts),
            max_iterations=est.getint("max_iterations", ReconstructionOptions.max_iterations),
            objective_tolerance=est.getfloat(
                "objective_tolerance", ReconstructionOptions.objective_tolerance
            ),
            parameter_tolerance=est.getfloat(
                "parameter_tolerance", ReconstructionOptions.parameter_tolerance
            ),
            model_counts=est.get("model_counts", ReconstructionOptions.model_counts),
        )
        produced_list = _parse_list(sc.get("produced_per_measurement", ""), int)
        alpha_list = _parse_list(sc.get("alpha", ""), float)
        if not produced_list or not alpha_list:
            raise ConfigError(f"{path}: produced_per_measurement and alpha are required")
        base = ScenarioConfig(
            name=sc.get("name", "scenario"),
            system=sc.get("system", ""),
            produced_per_measurement=produced_list[0],
            alpha=alpha_list[0],
            lengths=_parse_lengths(sc.get("lengths", "")),
            alpha2=sc.getfloat("alpha2", None),
            lengths2=_parse_lengths(sc["lengths2"]) if sc.get("lengths2") else None,
            sample=sc.get("sample", None),
            sample_limit=sc.getint("sample_limit", None),
            sample_stride=sc.getint("sample_stride", 1),
            metrics=_parse_list(sc.get("metrics", "fidelity"), str),
            seed=sc.getint("seed", 0),
            options=options,
            attenuation_base=sc.get("attenuation_base", "e"),
            transmission_mode=sc.get("transmission_mode", "per_setting"),
            renormalize_counts=sc.getboolean("renormalize_counts", False),
            noise_mode=sc.get("noise_mode", "stochastic"),
        )
    except (ValueError, InvalidArgumentError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    variants = []
    idx = 0
    for n in produced_list:
        for alpha in alpha_list:
            variants.append(
                replace(base, produced_per_measurement=n, alpha=alpha, variant_index=idx)
            )
            idx += 1
    return variants, (len(produced_list) > 1, len(alpha_list) > 1)
