"""Figures of merit: fidelity, concurrence, negativity, CHSH threshold."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, MetricRangeError
from .qlinalg import hermitian_eigvals, partial_transpose, psd_sqrt, trace_norm

CHSH_THRESHOLD = 1.0 / math.sqrt(2.0)
# raw values may stick out of [0, 1] by float noise only
RANGE_TOL = 1e-9

_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class MetricValue:
    name: str
    value: float


def _banded(name, raw):
    if raw < -RANGE_TOL or raw > 1.0 + RANGE_TOL:
        raise MetricRangeError(f"{name} value {raw!r} outside [0, 1] tolerance band")
    return MetricValue(name=name, value=min(1.0, max(0.0, raw)))


def fidelity(rho_in, rho_x):
    """(Tr sqrt(sqrt(rho_in) rho_x sqrt(rho_in)))^2."""
    rho_in = np.asarray(rho_in)
    rho_x = np.asarray(rho_x)
    if rho_in.shape != rho_x.shape:
        raise InvalidArgumentError(
            f"dimension mismatch: {rho_in.shape} vs {rho_x.shape}"
        )
    root = psd_sqrt(rho_in)
    inner = root @ rho_x @ root
    raw = float(np.sum(_sqrt_spectrum(inner)) ** 2)
    return _banded("fidelity", raw)


def _sqrt_spectrum(a):
    """Square roots of the eigenvalues of a nominally PSD matrix.

    Eigenvalues at float-noise scale are zeroed first; the square root
    would otherwise turn 1e-17 noise into 1e-9 errors.
    """
    w = hermitian_eigvals((a + a.conj().T) / 2.0)
    w[w < 1e-14 * max(1.0, w[-1])] = 0.0
    return np.sqrt(w)


def concurrence(rho):
    """Wootters concurrence of a two-qubit state.

    Computed from the Hermitian product sqrt(rho) rho~ sqrt(rho), which
    is similar to rho rho~ but keeps the eigensolver well conditioned.
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise InvalidArgumentError("concurrence requires a 4x4 density matrix")
    flipped = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    root = psd_sqrt((rho + rho.conj().T) / 2.0)
    lam = _sqrt_spectrum(root @ flipped @ root)[::-1]
    raw = float(lam[0] - lam[1] - lam[2] - lam[3])
    return _banded("concurrence", max(0.0, raw))


def negativity(rho, dim_a, dim_b):
    """(trace norm of the partial transpose - 1) / 2."""
    rho = np.asarray(rho)
    if rho.shape != (dim_a * dim_b, dim_a * dim_b):
        raise InvalidArgumentError(
            f"operator shape {rho.shape} does not match dims ({dim_a}, {dim_b})"
        )
    raw = (trace_norm(partial_transpose(rho, dim_a, dim_b)) - 1.0) / 2.0
    return _banded("negativity", raw)


def chsh_violation_possible(c: MetricValue):
    """True iff the concurrence strictly exceeds 1/sqrt(2)."""
    if c.name != "concurrence":
        raise InvalidArgumentError(f"expected a concurrence value, got {c.name!r}")
    return c.value > CHSH_THRESHOLD
