"""Dense complex-matrix helpers for operators no larger than 9x9.

Everything here is a pure function of its inputs. Matrices are numpy
arrays of complex128; density matrices are validated, not wrapped.
"""

import numpy as np

from .errors import InvalidArgumentError, NotPsdError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
# float noise below this is clamped inside psd_sqrt; worse means a bug
PSD_HARD_LIMIT = 1e-8


def dagger(a):
    return a.conj().T


def is_hermitian(a, tol=HERMITICITY_TOL):
    return np.max(np.abs(a - dagger(a))) <= tol


def assert_density_matrix(rho, tol=HERMITICITY_TOL):
    """Raise InvalidArgumentError unless rho is Hermitian, unit-trace, PSD."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError(f"density matrix must be square, got {rho.shape}")
    if not is_hermitian(rho, tol):
        raise InvalidArgumentError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise InvalidArgumentError(f"trace is {np.trace(rho).real!r}, expected 1")
    if hermitian_eigvals(rho)[0] < -PSD_TOL:
        raise InvalidArgumentError("density matrix has a negative eigenvalue")
    return rho


def tensor_product(a, b):
    """Kronecker product; block (i, j) equals a[i, j] * b."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_transpose(rho, dim_a, dim_b):
    """Transpose the first tensor factor of a bipartite operator."""
    rho = np.asarray(rho)
    if rho.shape != (dim_a * dim_b, dim_a * dim_b):
        raise InvalidArgumentError(
            f"operator shape {rho.shape} does not match dims ({dim_a}, {dim_b})"
        )
    blocks = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    return blocks.transpose(2, 1, 0, 3).reshape(dim_a * dim_b, dim_a * dim_b)


def hermitian_eigvals(a):
    """Real eigenvalues of a Hermitian matrix, ascending."""
    a = np.asarray(a)
    if not is_hermitian(a):
        raise InvalidArgumentError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(a)


def psd_sqrt(a):
    """Hermitian square root of a PSD matrix.

    Eigenvalues in [-1e-8, 0) are treated as float noise and clamped;
    anything more negative raises NotPsdError.
    """
    a = np.asarray(a)
    if not is_hermitian(a):
        raise InvalidArgumentError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(a)
    if w[0] < -PSD_HARD_LIMIT:
        raise NotPsdError(f"eigenvalue {w[0]!r} below the PSD hard limit")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def trace_norm(a):
    """Sum of singular values (sum of |eigenvalues| for Hermitian input)."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError("trace norm needs a square matrix")
    if is_hermitian(a):
        return float(np.sum(np.abs(np.linalg.eigvalsh(a))))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))
