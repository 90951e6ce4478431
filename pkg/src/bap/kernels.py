"""Selects the compiled evaluation kernels when available.

The Cython extension is optional: installs without a C toolchain fall
back to the numpy implementations in ``_kernels_py``. Set
``BAP_PURE_PYTHON=1`` to force the fallback (useful for benchmarking and
for checking the two paths against each other).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("BAP_PURE_PYTHON"):
    _impl = _kernels_py
    IMPLEMENTATION = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = _kernels_py
        IMPLEMENTATION = "python"

max_exceedance_probs = _impl.max_exceedance_probs
binned_counts = _impl.binned_counts


def implementation() -> str:
    """Active kernel backend: "compiled" or "python"."""
    return IMPLEMENTATION
