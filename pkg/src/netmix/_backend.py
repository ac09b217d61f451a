"""Kernel backend selection.

The Gibbs sweep has two interchangeable implementations: a numba-jitted
kernel and a pure-numpy one. Selection is controlled by the environment
variable ``NETMIX_BACKEND``:

* unset or ``auto``: numba when importable and functional, else numpy
* ``numba``: require the jitted kernel (ImportError if numba is unusable)
* ``numpy``: force the fallback

``benchmarks/backend_bench.py`` compares the two.
"""

from __future__ import annotations

import os

_NUMBA_OK: bool | None = None


def _numba_usable() -> bool:
    global _NUMBA_OK
    if _NUMBA_OK is None:
        try:
            from . import _kernels_numba  # noqa: F401

            _NUMBA_OK = True
        except Exception:
            _NUMBA_OK = False
    return _NUMBA_OK


def backend_name() -> str:
    """Resolve the active backend from NETMIX_BACKEND."""
    req = os.environ.get("NETMIX_BACKEND", "auto").strip().lower()
    if req not in ("auto", "numba", "numpy"):
        raise ValueError(
            "NETMIX_BACKEND must be 'auto', 'numba', or 'numpy', got %r" % req
        )
    if req == "numpy":
        return "numpy"
    if req == "numba":
        if not _numba_usable():
            raise ImportError("NETMIX_BACKEND=numba but numba is not usable")
        return "numba"
    return "numba" if _numba_usable() else "numpy"


def sweep_kernel(name: str | None = None):
    """Return the sweep kernel for the given (or env-resolved) backend."""
    name = name or backend_name()
    if name == "numba":
        from ._kernels_numba import run_sweep
    else:
        from ._kernels_numpy import run_sweep
    return run_sweep
