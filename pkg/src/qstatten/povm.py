"""SIC-POVM construction for qubits and qutrits, plus tensor products.

Operator ordering is part of the file-format contract: count vectors are
index-aligned with PovmSet.operators and must never be permuted.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .qlinalg import dagger, hermitian_eigvals, is_hermitian, tensor_product

COMPLETENESS_TOL = 1e-10
OVERLAP_TOL = 1e-10

# tetrahedron axes on the Bloch sphere, fixed order
_TETRAHEDRON = np.array(
    [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=float
) / np.sqrt(3.0)

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class PovmSet:
    """Ordered measurement operators M_1..M_eta summing to the identity."""

    dim: int
    operators: np.ndarray  # shape (eta, dim, dim), complex
    sic: bool = False
    eta: int = field(init=False)

    def __post_init__(self):
        ops = np.ascontiguousarray(self.operators, dtype=np.complex128)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "eta", ops.shape[0])
        ops.setflags(write=False)

    def transposed_flat(self):
        """(eta, dim*dim) array of vec(M_k^T), for fast Tr(M_k rho) dots."""
        eta = self.eta
        return np.ascontiguousarray(
            self.operators.transpose(0, 2, 1).reshape(eta, -1)
        )


def sic_overlap(d, j, k):
    """Target Hilbert-Schmidt overlap Tr(M_j M_k) for a dimension-d SIC."""
    return (d * (1 if j == k else 0) + 1) / (d * d * (d + 1))


def sic_povm(d):
    """The d^2-element SIC-POVM for d = 2 or 3.

    d=2 uses the Bloch tetrahedron; d=3 the Weyl-Heisenberg orbit of the
    fiducial (|0> - |1>)/sqrt(2), one projector per (a, b) in lexicographic
    order, each scaled by 1/d.
    """
    if d == 2:
        ops = np.empty((4, 2, 2), dtype=np.complex128)
        eye = np.eye(2, dtype=np.complex128)
        for k, (sx, sy, sz) in enumerate(_TETRAHEDRON):
            ops[k] = (eye + sx * _PAULI_X + sy * _PAULI_Y + sz * _PAULI_Z) / 4.0
        return PovmSet(dim=2, operators=ops, sic=True)
    if d == 3:
        omega = np.exp(2j * np.pi / 3)
        fiducial = np.array([1, -1, 0], dtype=np.complex128) / np.sqrt(2.0)
        shift = np.roll(np.eye(3, dtype=np.complex128), 1, axis=0)
        clock = np.diag([1, omega, omega**2])
        ops = np.empty((9, 3, 3), dtype=np.complex128)
        for a in range(3):
            for b in range(3):
                psi = np.linalg.matrix_power(shift, a) @ (
                    np.linalg.matrix_power(clock, b) @ fiducial
                )
                ops[3 * a + b] = np.outer(psi, psi.conj()) / 3.0
        return PovmSet(dim=3, operators=ops, sic=True)
    raise InvalidArgumentError(f"SIC-POVM construction supports d in (2, 3), got {d}")


def product_povm(p, q):
    """Tensor products M_j x M_k, j outer and k inner (row-major order)."""
    ops = np.empty(
        (p.eta * q.eta, p.dim * q.dim, p.dim * q.dim), dtype=np.complex128
    )
    for j in range(p.eta):
        for k in range(q.eta):
            ops[j * q.eta + k] = tensor_product(p.operators[j], q.operators[k])
    # informationally complete, but the pairwise-overlap symmetry is lost
    return PovmSet(dim=p.dim * q.dim, operators=ops, sic=False)


def validate_povm(p):
    """Return a list of (check, magnitude) pairs for violated invariants."""
    report = []
    for k in range(p.eta):
        m = p.operators[k]
        if not is_hermitian(m):
            report.append((f"operator {k} hermiticity", float(np.max(np.abs(m - dagger(m))))))
            continue
        lo = hermitian_eigvals(m)[0]
        if lo < -COMPLETENESS_TOL:
            report.append((f"operator {k} positivity", float(-lo)))
    total = p.operators.sum(axis=0)
    defect = float(np.max(np.abs(total - np.eye(p.dim))))
    if defect > COMPLETENESS_TOL:
        report.append(("completeness", defect))
    if p.sic:
        worst = 0.0
        for j in range(p.eta):
            for k in range(p.eta):
                got = float(np.real(np.trace(p.operators[j] @ p.operators[k])))
                worst = max(worst, abs(got - sic_overlap(p.dim, j, k)))
        if worst > OVERLAP_TOL:
            report.append(("sic overlap law", worst))
    return report
