import numpy as np
import pytest

from qstatten.channel import RngStream, expected_counts
from qstatten.errors import DegenerateParametersError, InvalidArgumentError
from qstatten.estimator import (
    ReconstructionOptions,
    ls_objective,
    params_to_density,
    reconstruct,
)
from qstatten.metrics import fidelity
from qstatten.povm import sic_povm


def lower_cholesky_params(rho):
    """Parameter vector reproducing rho, via the reversed factorization.

    Used as the objective-at-truth witness; rho = T^dag T needs T lower
    triangular, which is the Cholesky factor of the axis-flipped matrix.
    """
    d = rho.shape[0]
    flip = np.eye(d)[::-1]
    lower = np.linalg.cholesky(flip @ (rho + 1e-12 * np.eye(d)) @ flip)
    t_mat = flip @ lower.conj().T @ flip
    t = np.zeros(d * d)
    t[:d] = np.diag(t_mat).real
    k = d
    for r in range(1, d):
        for c in range(r):
            t[k] = t_mat[r, c].real
            t[k + 1] = t_mat[r, c].imag
            k += 2
    return t


def haar_qubit(gen):
    a = gen.normal(size=2) + 1j * gen.normal(size=2)
    return a / np.linalg.norm(a)


def test_params_to_density_closed_forms():
    assert np.allclose(params_to_density([1, 0, 0, 0]), np.diag([1.0, 0.0]), atol=1e-15)
    assert np.allclose(params_to_density([1, 1, 0, 0]), np.eye(2) / 2, atol=1e-15)


def test_params_to_density_scale_invariance():
    gen = np.random.Generator(np.random.Philox(21))
    for _ in range(200):
        t = gen.uniform(-1, 1, size=9)
        for c in (2.0, -3.5, 1e-3):
            assert np.max(
                np.abs(params_to_density(c * t) - params_to_density(t))
            ) < 1e-9


def test_params_to_density_fuzz_stays_physical():
    gen = np.random.Generator(np.random.Philox(22))
    dims = [2] * 4000 + [3] * 3000 + [4] * 2000 + [9] * 1000
    for d in dims:
        rho = params_to_density(gen.uniform(-1, 1, size=d * d), d)
        assert np.max(np.abs(rho - rho.conj().T)) <= 1e-10
        assert abs(np.trace(rho).real - 1) <= 1e-10
        assert np.linalg.eigvalsh(rho)[0] >= -1e-10


def test_params_to_density_rejects_degenerate_input():
    with pytest.raises(DegenerateParametersError):
        params_to_density(np.zeros(4))
    with pytest.raises(InvalidArgumentError):
        params_to_density([1.0, np.nan, 0, 0])
    with pytest.raises(InvalidArgumentError):
        params_to_density(np.ones(5))


def test_ls_objective_hand_values():
    povm = sic_povm(2)
    t_mixed = np.array([1.0, 1.0, 0.0, 0.0])
    measured = np.array([25, 25, 25, 25])
    assert ls_objective(t_mixed, measured, povm, 100) == pytest.approx(0.0, abs=1e-18)
    zeros = np.zeros(4)
    # hand evaluation: four terms of (25 - 0)^2
    assert ls_objective(t_mixed, zeros, povm, 100) == pytest.approx(2500.0, abs=1e-9)


def test_ls_objective_rounded_perfect_fit():
    povm = sic_povm(2)
    gen = np.random.Generator(np.random.Philox(23))
    opts = ReconstructionOptions(model_counts="rounded")
    t = gen.uniform(-1, 1, size=4)
    rho = params_to_density(t)
    measured = expected_counts(rho, povm, 173)
    assert ls_objective(t, measured, povm, 173, opts) == 0.0


def test_ls_objective_scale_invariance():
    povm = sic_povm(3)
    gen = np.random.Generator(np.random.Philox(24))
    t = gen.uniform(-1, 1, size=9)
    m = gen.integers(0, 40, size=9)
    a = ls_objective(t, m, povm, 100)
    b = ls_objective(-2.25 * t, m, povm, 100)
    assert a == pytest.approx(b, rel=1e-9)


def test_reconstruct_noiseless_qubit():
    povm = sic_povm(2)
    gen = np.random.Generator(np.random.Philox(25))
    psi = haar_qubit(gen)
    rho = np.outer(psi, psi.conj())
    counts = expected_counts(rho, povm, 10**6)
    res = reconstruct(counts, povm, 10**6, rng=RngStream(31).child(0))
    assert res.converged
    assert fidelity(rho, res.rho_hat).value >= 0.999


def test_reconstruct_recovers_maximally_mixed():
    povm = sic_povm(2)
    counts = expected_counts(np.eye(2, dtype=complex) / 2, povm, 10**4)
    res = reconstruct(counts, povm, 10**4, rng=RngStream(32).child(0))
    assert np.max(np.abs(res.rho_hat - np.eye(2) / 2)) < 5e-3


def test_reconstruct_zero_counts_contract():
    povm = sic_povm(2)
    res = reconstruct(np.zeros(4), povm, 0, rng=RngStream(33).child(0))
    rho = res.rho_hat
    assert abs(np.trace(rho).real - 1) < 1e-10
    assert np.linalg.eigvalsh(rho)[0] >= -1e-10
    assert res.objective_value == pytest.approx(0.0, abs=1e-12)
    assert isinstance(res.converged, bool)


def test_reconstruct_never_beats_worse_than_truth():
    # the optimizer must reach at least the generator state's residual
    povm = sic_povm(2)
    gen = np.random.Generator(np.random.Philox(26))
    for trial in range(10):
        psi = haar_qubit(gen)
        rho = np.outer(psi, psi.conj())
        counts = expected_counts(rho, povm, 300)
        noisy = np.maximum(0, counts + gen.integers(-5, 6, size=4))
        res = reconstruct(noisy, povm, 300, rng=RngStream(34).child(trial))
        truth = ls_objective(lower_cholesky_params(rho), noisy, povm, 300)
        assert res.objective_value <= truth + 1e-6


def test_reconstruct_deterministic_given_starts():
    povm = sic_povm(3)
    gen = np.random.Generator(np.random.Philox(27))
    t = gen.uniform(-1, 1, size=9)
    counts = expected_counts(params_to_density(t), povm, 500)
    starts = gen.uniform(-1, 1, size=(5, 9))
    a = reconstruct(counts, povm, 500, starts=starts)
    b = reconstruct(counts, povm, 500, starts=starts.copy())
    assert np.array_equal(a.rho_hat, b.rho_hat)
    assert a.objective_value == b.objective_value
    assert a.iterations_used == b.iterations_used


def test_reconstruct_rounded_mode_runs():
    povm = sic_povm(2)
    gen = np.random.Generator(np.random.Philox(28))
    psi = haar_qubit(gen)
    rho = np.outer(psi, psi.conj())
    counts = expected_counts(rho, povm, 2000)
    opts = ReconstructionOptions(model_counts="rounded", restarts=3)
    res = reconstruct(counts, povm, 2000, opts, rng=RngStream(35).child(0))
    assert fidelity(rho, res.rho_hat).value > 0.9
    assert res.restarts_used == 3


def test_reconstruct_consistency_in_photon_budget():
    # mean infidelity strictly falls with N at 3 sigma, 20 states x 50 reps
    povm = sic_povm(2)
    gen = np.random.Generator(np.random.Philox(29))
    states = [haar_qubit(gen) for _ in range(20)]
    budgets = (100, 1000, 10_000, 100_000)
    means, sems = [], []
    for b_idx, n in enumerate(budgets):
        infid = []
        for s_idx, psi in enumerate(states):
            rho = np.outer(psi, psi.conj())
            probs = expected_counts(rho, povm, 10**9) / 10**9
            for rep in range(50):
                unit = RngStream(36).child(b_idx, s_idx, rep)
                counts = unit.child(0).generator().poisson(n * probs)
                res = reconstruct(counts, povm, n, rng=unit.child(1))
                infid.append(1.0 - fidelity(rho, res.rho_hat).value)
        infid = np.array(infid)
        means.append(infid.mean())
        sems.append(infid.std(ddof=1) / np.sqrt(infid.size))
    for i in range(len(budgets) - 1):
        gap = means[i] - means[i + 1]
        assert gap > 3 * np.hypot(sems[i], sems[i + 1])


def test_options_validation():
    with pytest.raises(InvalidArgumentError):
        ReconstructionOptions(restarts=0)
    with pytest.raises(InvalidArgumentError):
        ReconstructionOptions(objective_tolerance=0.0)
    with pytest.raises(InvalidArgumentError):
        ReconstructionOptions(model_counts="exact")
