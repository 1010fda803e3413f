"""Least-squares state reconstruction over the Cholesky parameterization."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateParametersError, InvalidArgumentError
from .povm import PovmSet

DEFAULT_RESTARTS = 5
DEFAULT_MAX_ITERATIONS = 400
DEFAULT_OBJECTIVE_TOLERANCE = 1e-11
DEFAULT_PARAMETER_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ReconstructionOptions:
    restarts: int = DEFAULT_RESTARTS
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    objective_tolerance: float = DEFAULT_OBJECTIVE_TOLERANCE
    parameter_tolerance: float = DEFAULT_PARAMETER_TOLERANCE
    model_counts: str = "continuous"

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidArgumentError("restarts must be >= 1")
        if self.objective_tolerance <= 0 or self.parameter_tolerance <= 0:
            raise InvalidArgumentError("tolerances must be positive")
        if self.model_counts not in ("continuous", "rounded"):
            raise InvalidArgumentError(
                f"model_counts must be continuous or rounded, got {self.model_counts!r}"
            )


@dataclass(frozen=True)
class ReconstructionResult:
    rho_hat: np.ndarray
    objective_value: float
    iterations_used: int
    restarts_used: int
    converged: bool


def param_count(d):
    return d * d


def params_to_density(t, d=None):
    """rho = T^dag T / Tr(T^dag T); PSD and unit-trace by construction."""
    t = np.asarray(t, dtype=np.float64)
    if d is None:
        d = int(round(math.sqrt(t.size)))
    if t.size != d * d:
        raise InvalidArgumentError(f"parameter vector length {t.size}, expected {d * d}")
    if not np.all(np.isfinite(t)):
        raise InvalidArgumentError("parameter vector contains NaN or Inf")
    if float(np.dot(t, t)) < 1e-300:
        raise DegenerateParametersError("all-zero Cholesky parameters")
    rho = kernels.rho_from_params(t, d)
    return np.asarray((rho + rho.conj().T) / 2.0)


def ls_objective(t, measured, povm: PovmSet, produced, options=None):
    """Squared-residual objective of the count model against the data.

    Continuous mode keeps the model counts real; rounded mode applies
    the same half-up rounding the count generator uses, at the price of
    a piecewise-constant landscape.
    """
    options = options or ReconstructionOptions()
    measured = np.asarray(measured, dtype=np.float64)
    if measured.shape[0] != povm.eta:
        raise InvalidArgumentError(
            f"count vector length {measured.shape[0]} does not match eta {povm.eta}"
        )
    rho = params_to_density(t, povm.dim)
    q = np.real(np.einsum("kij,ji->k", povm.operators, rho))
    e = float(produced) * q
    if options.model_counts == "rounded":
        e = np.floor(e + 0.5)
    return float(np.sum((e - measured) ** 2))


def _reconstruct_rounded(measured, povm, produced, options, starts):
    # rounding kills the gradient, so fall back to a simplex search
    from scipy.optimize import minimize

    def fun(t):
        if float(np.dot(t, t)) < 1e-300:
            return float(np.sum(measured**2))
        rho = kernels.rho_from_params(t, povm.dim)
        q = np.real(np.einsum("kij,ji->k", povm.operators, rho))
        e = np.floor(float(produced) * q + 0.5)
        return float(np.sum((e - measured) ** 2))

    best = None
    best_r = 0
    total_iter = 0
    converged = False
    for r in range(starts.shape[0]):
        res = minimize(
            fun,
            starts[r],
            method="Nelder-Mead",
            options={
                "maxiter": options.max_iterations * starts.shape[1],
                "fatol": options.objective_tolerance,
                "xatol": options.parameter_tolerance,
            },
        )
        total_iter += int(res.nit)
        converged = converged or bool(res.success)
        if best is None or res.fun < best.fun - 1e-9:
            best = res
            best_r = r
    return best.x, float(best.fun), total_iter, converged, best_r


def reconstruct(measured, povm: PovmSet, produced, options=None, rng=None, starts=None):
    """Best reconstruction over multi-start quasi-Newton descent.

    Starting parameter vectors are uniform on [-1, 1]; pass `starts`
    explicitly or an RngStream/Generator to draw them. Non-convergence
    is reported through the flag, never raised.
    """
    options = options or ReconstructionOptions()
    measured = np.asarray(measured, dtype=np.float64)
    if measured.shape[0] != povm.eta:
        raise InvalidArgumentError(
            f"count vector length {measured.shape[0]} does not match eta {povm.eta}"
        )
    if produced < 0:
        raise InvalidArgumentError("produced count must be >= 0")
    n = param_count(povm.dim)
    if starts is None:
        if rng is None:
            raise InvalidArgumentError("either rng or starts is required")
        gen = rng.generator() if hasattr(rng, "generator") else rng
        starts = gen.uniform(-1.0, 1.0, size=(options.restarts, n))
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    if options.model_counts == "rounded":
        t_best, f_best, iters, conv, best_r = _reconstruct_rounded(
            measured, povm, produced, options, starts
        )
    else:
        t_best, f_best, iters, conv, best_r = kernels.reconstruct_ls(
            povm.transposed_flat(),
            measured,
            float(produced),
            povm.dim,
            starts,
            options.max_iterations,
            options.objective_tolerance,
            options.parameter_tolerance,
        )
    return ReconstructionResult(
        rho_hat=params_to_density(t_best, povm.dim),
        objective_value=float(f_best),
        iterations_used=int(iters),
        restarts_used=int(starts.shape[0]),
        converged=bool(conv),
    )
