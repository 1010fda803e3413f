import math

import numpy as np
import pytest

from qstatten.errors import InvalidArgumentError
from qstatten.states import (
    bloch_qubit,
    phase_sample,
    phi_family,
    qubit_sample,
    qutrit_grid,
    sample_by_name,
    theta_family,
    write_table,
)

PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def test_bloch_qubit_poles_and_equator():
    assert np.allclose(bloch_qubit(0.0, 0.0), [1, 0], atol=1e-15)
    south = bloch_qubit(math.pi, 0.0)
    assert abs(abs(south[1]) - 1.0) < 1e-12  # |1> up to global phase
    eq = bloch_qubit(math.pi / 2, 0.0)
    assert np.allclose(eq, [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_qubit_sample_size_and_determinism():
    sample = qubit_sample()
    assert sample.label == "qubit_fibonacci_220"
    assert len(sample.states) == 220
    again = qubit_sample()
    for a, b in zip(sample.states, again.states):
        assert np.array_equal(a, b)


def test_qubit_sample_norms_and_uniformity():
    sample = qubit_sample()
    bloch_sum = np.zeros(3)
    for psi in sample.states:
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
        rho = np.outer(psi, psi.conj())
        bloch_sum += [np.trace(rho @ s).real for s in PAULI]
    assert np.linalg.norm(bloch_sum) / 220 <= 0.02


def test_qutrit_grid_size_and_angles():
    sample = qutrit_grid()
    assert len(sample.states) == 5184
    thetas = sorted({p[0] for p in sample.parameters})
    assert thetas == pytest.approx([(j + 0.5) * math.pi / 12 for j in range(6)])
    phases = sorted({p[2] for p in sample.parameters})
    assert phases == pytest.approx([2 * math.pi * j / 12 for j in range(12)])
    for psi in sample.states[:50]:
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12


def test_qutrit_grid_has_no_duplicates():
    states = np.array(qutrit_grid().states)
    # chunked pairwise overlap scan
    for start in range(0, len(states), 648):
        chunk = states[start : start + 648]
        overlap = np.abs(chunk @ states.conj().T) ** 2
        for i in range(chunk.shape[0]):
            overlap[i, start + i] = 0.0
        assert overlap.max() < 1.0 - 1e-9


def test_phi_family_members():
    plus = phi_family(0.0)
    assert np.allclose(plus, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)], atol=1e-15)
    minus = phi_family(math.pi)
    assert np.allclose(minus, [1 / math.sqrt(2), 0, 0, -1 / math.sqrt(2)], atol=1e-12)


def test_theta_family_expansion_and_marginals():
    psi = theta_family(0.0)
    want = np.array([0, 0, 1, 0, 1, 0, 1, 0, 0]) / math.sqrt(3)
    assert np.allclose(psi, want, atol=1e-15)
    for phi in (0.0, 0.7, 4.4):
        rho = np.outer(theta_family(phi), theta_family(phi).conj())
        blocks = rho.reshape(3, 3, 3, 3)
        left = np.einsum("ikjk->ij", blocks)
        right = np.einsum("kikj->ij", blocks)
        assert np.max(np.abs(left - np.eye(3) / 3)) < 1e-12
        assert np.max(np.abs(right - np.eye(3) / 3)) < 1e-12


def test_phi_family_marginals():
    for phi in (0.0, 2.0):
        rho = np.outer(phi_family(phi), phi_family(phi).conj())
        blocks = rho.reshape(2, 2, 2, 2)
        left = np.einsum("ikjk->ij", blocks)
        assert np.max(np.abs(left - np.eye(2) / 2)) < 1e-12


def test_phase_sample_spacing():
    sample = phase_sample("phi")
    assert len(sample.states) == 100
    assert sample.parameters[0][0] == 0.0
    gaps = {
        round(b[0] - a[0], 12)
        for a, b in zip(sample.parameters, sample.parameters[1:])
    }
    assert gaps == {round(2 * math.pi / 100, 12)}
    assert len(phase_sample("theta").states) == 100
    with pytest.raises(InvalidArgumentError):
        phase_sample("psi")


def test_sample_registry_and_export(tmp_path):
    assert len(sample_by_name("phi_family_100").states) == 100
    with pytest.raises(InvalidArgumentError):
        sample_by_name("nope")
    out = tmp_path / "states.csv"
    write_table(phase_sample("phi"), out)
    lines = out.read_text().splitlines()
    assert len(lines) == 100
    first = lines[0].split(",")
    assert first[0] == "phi_family_100"
    # label, one phase parameter, then 4 re/im amplitude pairs
    assert len(first) == 1 + 1 + 8
    assert float(first[2]) == pytest.approx(1 / math.sqrt(2))
