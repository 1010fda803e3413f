"""Compare reconstruction throughput of the numba and numpy backends.

The backend is fixed at import time by QSTATTEN_BACKEND, so each
measurement runs in a child process. Usage:

    python3 benchmarks/bench_backends.py [--repeats 40]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_worker(backend, repeats):
    env = dict(os.environ, QSTATTEN_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, __file__, "--worker", "--repeats", str(repeats)],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"{backend} worker failed:\n{proc.stderr}")
    return json.loads(proc.stdout.splitlines()[-1])


def worker(repeats):
    import numpy as np

    from qstatten.channel import FiberSpec, RngStream, draw_measured_counts
    from qstatten.estimator import reconstruct
    from qstatten.kernels import BACKEND
    from qstatten.povm import product_povm, sic_povm
    from qstatten.states import sample_by_name

    cases = {}
    for name, povm, psi in (
        ("qubit-4p", sic_povm(2), sample_by_name("qubit_fibonacci_220").states[7]),
        (
            "two_qubit-16p",
            product_povm(sic_povm(2), sic_povm(2)),
            sample_by_name("phi_family_100").states[3],
        ),
    ):
        rho = np.outer(psi, psi.conj())
        counts = draw_measured_counts(
            rho, povm, 200, [FiberSpec(0.2, 10.0)] * (1 if povm.dim == 2 else 2),
            RngStream(5).child(0),
            transmission_mode="per_state",
        )
        n_model = int(counts.sum())
        # warm-up pays the jit compile cost outside the timed loop
        reconstruct(counts, povm, n_model, rng=RngStream(5).child(1))
        t0 = time.perf_counter()
        for i in range(repeats):
            reconstruct(counts, povm, n_model, rng=RngStream(6).child(i))
        per_call = (time.perf_counter() - t0) / repeats
        cases[name] = per_call
    print(json.dumps({"backend": BACKEND, "seconds_per_reconstruction": cases}))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=40)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        worker(args.repeats)
        return
    results = {b: run_worker(b, args.repeats) for b in ("numba", "numpy")}
    print(f"{'case':<16} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for case in results["numba"]["seconds_per_reconstruction"]:
        tn = results["numba"]["seconds_per_reconstruction"][case]
        tp = results["numpy"]["seconds_per_reconstruction"][case]
        print(f"{case:<16} {tn * 1e3:>10.2f}ms {tp * 1e3:>10.2f}ms {tp / tn:>8.1f}x")


if __name__ == "__main__":
    main()
