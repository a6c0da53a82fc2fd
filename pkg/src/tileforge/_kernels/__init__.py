"""Hot integer kernels with a numba path and a pure-numpy path.

The backend is chosen once at import time from ``TILEFORGE_BACKEND``
(``numba`` or ``numpy``; default ``numba`` when importable).  Both backends
return bit-identical results; ``tests/test_kernels.py`` checks parity and
``benchmarks/bench_kernels.py`` compares their speed.

Kernels take int64 arrays only.  Callers check magnitudes with
:func:`fits_int64` first and fall back to exact object-dtype arithmetic
through :mod:`.numpy_impl` when a bound is exceeded.
"""

from __future__ import annotations

import os
import warnings

from . import numpy_impl

INT64_SAFE = 2**62

KERNEL_NAMES = ("centered_mask", "level_step", "component_labels", "prune_fixed_point", "bin_coords")


def fits_int64(bound: int) -> bool:
    """True when every intermediate bounded by ``bound`` is safe in int64."""
    return abs(bound) < INT64_SAFE


def _load_numba():
    try:
        from . import numba_impl
    except ImportError:  # numba missing or broken
        return None
    return numba_impl


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` (``"numba"`` or ``"numpy"``)."""
    name = (name or os.environ.get("TILEFORGE_BACKEND", "numba")).strip().lower()
    if name == "numpy":
        return numpy_impl
    if name != "numba":
        raise ValueError(f"unknown TILEFORGE_BACKEND {name!r}; expected 'numba' or 'numpy'")
    mod = _load_numba()
    if mod is None:
        warnings.warn("numba unavailable; using the numpy kernels", RuntimeWarning, stacklevel=2)
        return numpy_impl
    return mod


kernels = get_backend()
backend_name = kernels.NAME


def set_num_threads(n: int) -> None:
    """Set the numba worker count; a no-op on the numpy backend."""
    if kernels.NAME == "numba":
        import numba

        numba.set_num_threads(n)
