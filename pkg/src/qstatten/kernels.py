"""Backend selection for the reconstruction kernels.

QSTATTEN_BACKEND=numpy forces the plain interpreter path,
QSTATTEN_BACKEND=numba requires numba, and the default (auto) uses
numba when it imports. The jitted functions are rebound into _impl so
that cross-calls inside that module resolve to compiled code too.
"""

import os

from . import _impl

_KERNEL_NAMES = (
    "rho_from_params",
    "povm_probs",
    "ls_value",
    "ls_gradient",
    "bfgs_minimize",
    "reconstruct_ls",
)

_requested = os.environ.get("QSTATTEN_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"QSTATTEN_BACKEND must be auto, numba or numpy, got {_requested!r}"
    )

BACKEND = "numpy"
if _requested in ("auto", "numba"):
    try:
        import numba
    except ImportError:
        if _requested == "numba":
            raise
    else:
        # order matters: callees must be jitted before their callers compile
        for _name in _KERNEL_NAMES:
            _jitted = numba.njit(cache=True, nogil=True)(getattr(_impl, _name))
            setattr(_impl, _name, _jitted)
        BACKEND = "numba"

rho_from_params = _impl.rho_from_params
povm_probs = _impl.povm_probs
ls_value = _impl.ls_value
ls_gradient = _impl.ls_gradient
bfgs_minimize = _impl.bfgs_minimize
reconstruct_ls = _impl.reconstruct_ls
