"""Command-line entry point: validate invariants, run one
reconstruction, or drive figure-reproduction sweeps."""

import argparse
import math
import os
import sys
import time
from importlib import resources

import numpy as np

from . import __version__
from .channel import FiberSpec, RngStream, draw_measured_counts, survival_probability
from .errors import QstattenError
from .estimator import params_to_density, reconstruct
from .experiment import load_scenarios, run_sweep, scenario_label, write_csv
from .kernels import BACKEND
from .metrics import concurrence, fidelity, negativity
from .povm import product_povm, sic_povm, sic_overlap, validate_povm
from .states import phase_sample, sample_by_name

FIGURE_NAMES = tuple(f"fig{i}" for i in range(1, 9))


def validation_checks(rng_seed=7):
    """Invariant suite behind `validate`: (name, margin, tolerance, ok)."""
    checks = []

    def add(name, margin, tol):
        checks.append((name, float(margin), float(tol), bool(margin <= tol)))

    sets = {
        "sic(2)": sic_povm(2),
        "sic(3)": sic_povm(3),
    }
    sets["product(2x2)"] = product_povm(sets["sic(2)"], sets["sic(2)"])
    sets["product(3x3)"] = product_povm(sets["sic(3)"], sets["sic(3)"])
    for name, p in sets.items():
        total = p.operators.sum(axis=0)
        add(f"{name} completeness", np.max(np.abs(total - np.eye(p.dim))), 1e-10)
        report = validate_povm(p)
        add(f"{name} invariant report empty", float(len(report)), 0.0)
    for name in ("sic(2)", "sic(3)"):
        p = sets[name]
        worst = 0.0
        for j in range(p.eta):
            for k in range(p.eta):
                got = float(np.real(np.trace(p.operators[j] @ p.operators[k])))
                worst = max(worst, abs(got - sic_overlap(p.dim, j, k)))
        add(f"{name} overlap law", worst, 1e-10)

    phis = phase_sample("phi")
    worst = max(abs(concurrence(np.outer(s, s.conj())).value - 1.0) for s in phis.states)
    add("concurrence of phi family", worst, 1e-10)
    thetas = phase_sample("theta")
    worst = max(
        abs(negativity(np.outer(s, s.conj()), 3, 3).value - 1.0) for s in thetas.states
    )
    add("negativity of theta family", worst, 1e-10)

    gen = np.random.Generator(np.random.Philox(rng_seed))
    worst = 0.0
    for _ in range(100):
        a = gen.normal(size=2) + 1j * gen.normal(size=2)
        b = gen.normal(size=2) + 1j * gen.normal(size=2)
        psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        rho = np.outer(psi, psi.conj())
        worst = max(worst, concurrence(rho).value, negativity(rho, 2, 2).value)
    add("entanglement measures vanish on product states", worst, 1e-9)

    worst = 0.0
    for d in (2, 3, 4, 9):
        trials = 2500 if d < 9 else 500
        for _ in range(trials):
            t = gen.uniform(-1.0, 1.0, size=d * d)
            rho = params_to_density(t, d)
            herm = np.max(np.abs(rho - rho.conj().T))
            tr = abs(np.trace(rho).real - 1.0)
            lo = max(0.0, -float(np.linalg.eigvalsh(rho)[0]))
            worst = max(worst, herm, tr, lo)
    add("parameterized density matrices stay physical", worst, 1e-10)
    return checks


def cmd_validate(_args):
    checks = validation_checks()
    width = max(len(name) for name, *_ in checks)
    ok_all = True
    for name, margin, tol, ok in checks:
        ok_all &= ok
        status = "pass" if ok else "FAIL"
        print(f"{name:<{width}}  margin={margin:.3e}  tol={tol:.3e}  {status}")
    print(f"backend: {BACKEND}")
    return 0 if ok_all else 1


def _effective_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QSTATTEN_SEED")
    if env:
        return int(env)
    return None


def _load(args):
    variants, multi = load_scenarios(args.config, args.override)
    seed = _effective_seed(args)
    if seed is not None:
        from dataclasses import replace

        variants = [replace(v, seed=seed) for v in variants]
    return variants, multi


def cmd_reconstruct(args):
    variants, _ = _load(args)
    config = variants[0]
    states = sample_by_name(config.sample).states
    idx = args.state_index % len(states)
    psi = states[idx]
    rho_in = np.outer(psi, psi.conj())
    from .experiment import _povm_for  # single source of system -> POVM truth

    povm = _povm_for(config.system)
    fibers = [FiberSpec(config.alpha, config.lengths[0])]
    if config.is_bipartite:
        fibers.append(FiberSpec(config.alpha2, config.lengths2[0]))
    unit = RngStream(config.seed).child(config.variant_index, 0, 0, idx)
    m = draw_measured_counts(
        rho_in,
        povm,
        config.produced_per_measurement,
        fibers,
        unit.child(0),
        base=config.attenuation_base,
        transmission_mode=config.transmission_mode,
        deterministic=config.noise_mode == "deterministic",
    )
    n_model = int(m.sum()) if config.renormalize_counts else config.produced_per_measurement
    starts = unit.child(1).generator().uniform(
        -1.0, 1.0, size=(config.options.restarts, povm.dim**2)
    )
    res = reconstruct(m, povm, n_model, config.options, starts=starts)
    p = survival_probability(fibers, base=config.attenuation_base)
    print(f"state index {idx} of {config.sample}, survival probability {p:.6g}")
    print(f"counts: total {int(m.sum())} over {povm.eta} operators")
    print(
        f"objective {res.objective_value:.6g}, iterations {res.iterations_used},"
        f" converged {res.converged}"
    )
    print(f"fidelity {fidelity(rho_in, res.rho_hat).value:.6f}")
    if config.system == "two_qubit":
        print(f"concurrence {concurrence(res.rho_hat).value:.6f}")
    if config.is_bipartite:
        half = int(round(math.sqrt(povm.dim)))
        print(f"negativity {negativity(res.rho_hat, half, half).value:.6f}")
    return 0


def _run_config(variants, multi, out_dir, threads, csv_name):
    multi_n, multi_alpha = multi
    os.makedirs(out_dir, exist_ok=True)
    labeled = []
    t0 = time.perf_counter()
    for config in variants:
        label = scenario_label(config, multi_n, multi_alpha)
        result = run_sweep(config, threads=threads)
        labeled.append((label, config, result))
        first = min(result.cells)
        last = max(result.cells)
        for metric in result.metrics:
            lo = result.cells[first][metric][0]
            hi = result.cells[last][metric][0]
            print(
                f"  {label} {metric}: first cell {lo:.4f}, last cell {hi:.4f},"
                f" n={result.n}"
            )
    path = os.path.join(out_dir, csv_name)
    write_csv(path, labeled)
    print(f"wrote {path} in {time.perf_counter() - t0:.1f}s")
    return 0


def cmd_sweep(args):
    variants, multi = _load(args)
    name = os.path.splitext(os.path.basename(args.config))[0]
    return _run_config(variants, multi, args.out, args.threads, name + ".csv")


def cmd_figures(args):
    names = FIGURE_NAMES if args.only is None else (args.only,)
    for name in names:
        if name not in FIGURE_NAMES:
            print(f"unknown figure {name!r}; choose from {', '.join(FIGURE_NAMES)}")
            return 2
    status = 0
    for name in names:
        ref = resources.files("qstatten").joinpath("configs", f"{name}.cfg")
        with resources.as_file(ref) as path:
            args.config = str(path)
            variants, multi = _load(args)
        print(f"{name}:")
        status |= _run_config(variants, multi, args.out, args.threads, f"{name}.csv")
    return status


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qstatten",
        description="Simulate state tomography through attenuating fiber.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="run the invariant suite")
    p_val.set_defaults(func=cmd_validate)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=False, help="scenario config file")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="master seed override")
    common.add_argument("--threads", type=int, default=1, help="worker thread cap")
    common.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="config override, repeatable",
    )

    p_rec = sub.add_parser("reconstruct", parents=[common], help="run one state")
    p_rec.add_argument("--state-index", type=int, default=0)
    p_rec.set_defaults(func=cmd_reconstruct)

    p_sweep = sub.add_parser("sweep", parents=[common], help="run one config")
    p_sweep.set_defaults(func=cmd_sweep)

    p_fig = sub.add_parser("figures", parents=[common], help="run bundled configs")
    p_fig.add_argument("--only", default=None, metavar="NAME", help="one of fig1..fig8")
    p_fig.set_defaults(func=cmd_figures)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("sweep", "reconstruct") and not args.config:
        parser.error(f"{args.command} requires --config")
    try:
        return args.func(args)
    except QstattenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
