"""Numba/NumPy backend selection.

The hot kernels in :mod:`salfuse._kernels` exist twice: a numba ``@njit``
version and a pure-numpy twin that performs the identical sequence of
floating-point operations, so both backends produce bit-identical output.

Selection is controlled by the ``SALFUSE_BACKEND`` environment variable:

* ``auto`` (default) - numba when importable, numpy otherwise
* ``numba``          - require numba, fail loudly if it is missing
* ``numpy``          - force the pure-numpy fallback
"""

import os

_requested = os.environ.get("SALFUSE_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"SALFUSE_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

try:
    from numba import njit, prange  # noqa: F401
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
    njit = None
    prange = range

if _requested == "numba" and not HAS_NUMBA:
    raise RuntimeError("SALFUSE_BACKEND=numba but numba is not installed")

USE_NUMBA = HAS_NUMBA if _requested == "auto" else _requested == "numba"


def active_backend() -> str:
    """Name of the backend the hot kernels will dispatch to."""
    return "numba" if USE_NUMBA else "numpy"
