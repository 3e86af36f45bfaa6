"""Kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
module. Set ``DIRECTENT_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _purepy

try:
    if os.environ.get("DIRECTENT_PURE", "") not in ("", "0"):
        raise ImportError("pure backend forced")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _purepy
    BACKEND = "python"

jacobi_hermitian = _impl.jacobi_hermitian
permuted_pairs = _impl.permuted_pairs
inverse_cdf = _impl.inverse_cdf

__all__ = ["BACKEND", "jacobi_hermitian", "permuted_pairs", "inverse_cdf"]
