"""Deterministic input-state samples: Bloch-lattice qubits, a qutrit
angle grid, and the two maximally entangled phase families."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

QUBIT_SAMPLE_SIZE = 220
QUTRIT_THETA_STEPS = 6
QUTRIT_PHI_STEPS = 12
PHASE_SAMPLE_SIZE = 100


@dataclass(frozen=True)
class StateSample:
    label: str
    states: tuple  # of complex amplitude vectors
    parameters: tuple  # per-state parameter tuples, same order


def bloch_qubit(theta, phi):
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    theta = math.fmod(theta, 2.0 * math.pi)
    return np.array(
        [math.cos(theta / 2.0), np.exp(1j * phi) * math.sin(theta / 2.0)],
        dtype=np.complex128,
    )


def qubit_sample():
    """220 near-uniform Bloch points on a spherical Fibonacci lattice.

    z is sampled symmetrically around zero, so the lattice has no polar
    clustering and its mean Bloch vector nearly cancels.
    """
    n = QUBIT_SAMPLE_SIZE
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    states = []
    params = []
    for i in range(n):
        z = 1.0 - (2.0 * i + 1.0) / n
        theta = math.acos(z)
        phi = math.fmod(2.0 * math.pi * i / golden, 2.0 * math.pi)
        states.append(bloch_qubit(theta, phi))
        params.append((theta, phi))
    return StateSample("qubit_fibonacci_220", tuple(states), tuple(params))


def qutrit_state(theta1, theta2, phi1, phi2):
    return np.array(
        [
            math.cos(theta1),
            math.sin(theta1) * math.cos(theta2) * np.exp(1j * phi1),
            math.sin(theta1) * math.sin(theta2) * np.exp(1j * phi2),
        ],
        dtype=np.complex128,
    )


def qutrit_grid():
    """5184 qutrits: 6x6 half-offset polar angles, 12x12 phases."""
    thetas = [(j + 0.5) * math.pi / 12.0 for j in range(QUTRIT_THETA_STEPS)]
    phis = [2.0 * math.pi * j / QUTRIT_PHI_STEPS for j in range(QUTRIT_PHI_STEPS)]
    states = []
    params = []
    for t1 in thetas:
        for t2 in thetas:
            for p1 in phis:
                for p2 in phis:
                    states.append(qutrit_state(t1, t2, p1, p2))
                    params.append((t1, t2, p1, p2))
    return StateSample("qutrit_grid_5184", tuple(states), tuple(params))


def phi_family(phi):
    """(|00> + e^{i phi}|11>)/sqrt(2)."""
    psi = np.zeros(4, dtype=np.complex128)
    psi[0] = 1.0 / math.sqrt(2.0)
    psi[3] = np.exp(1j * phi) / math.sqrt(2.0)
    return psi


def theta_family(phi):
    """(e^{i phi}|02> + |11> + e^{i phi}|20>)/sqrt(3)."""
    psi = np.zeros(9, dtype=np.complex128)
    phase = np.exp(1j * phi) / math.sqrt(3.0)
    psi[2] = phase
    psi[4] = 1.0 / math.sqrt(3.0)
    psi[6] = phase
    return psi


def phase_sample(family):
    """100 equally spaced phases of one entangled family."""
    if family == "phi":
        make, label = phi_family, "phi_family_100"
    elif family == "theta":
        make, label = theta_family, "theta_family_100"
    else:
        raise InvalidArgumentError(f"family must be phi or theta, got {family!r}")
    phases = [2.0 * math.pi * j / PHASE_SAMPLE_SIZE for j in range(PHASE_SAMPLE_SIZE)]
    return StateSample(label, tuple(make(p) for p in phases), tuple((p,) for p in phases))


def write_table(sample: StateSample, path):
    """One state per row: label, parameters, then re/im amplitude pairs."""
    with open(path, "w", encoding="utf-8") as fh:
        for psi, pars in zip(sample.states, sample.parameters):
            cells = [sample.label]
            cells += [f"{p:.17g}" for p in pars]
            for a in psi:
                cells.append(f"{a.real:.17g}")
                cells.append(f"{a.imag:.17g}")
            fh.write(",".join(cells) + "\n")


_BUILTIN = {
    "qubit_fibonacci_220": qubit_sample,
    "qutrit_grid_5184": qutrit_grid,
    "phi_family_100": lambda: phase_sample("phi"),
    "theta_family_100": lambda: phase_sample("theta"),
}


def sample_by_name(name):
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise InvalidArgumentError(
            f"unknown sample {name!r}; choose from {sorted(_BUILTIN)}"
        ) from None
