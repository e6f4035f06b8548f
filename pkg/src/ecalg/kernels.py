"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``ECALG_PURE_PYTHON=1`` to force the pure-Python kernels (used by the
benchmark and the kernel-equivalence tests).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ECALG_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

convolve = _impl.convolve
convolve_into = _impl.convolve_into
add_into = _impl.add_into
strip_zeros = _impl.strip_zeros

#: "compiled" or "pure" — which twin is live in this process.
KERNEL_IMPL = "compiled" if _impl.__name__.endswith("_kernels_cy") else "pure"
