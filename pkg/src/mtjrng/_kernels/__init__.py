"""Kernel selection: compiled extension when available, numpy/Python otherwise.

Set MTJRNG_PURE=1 to force the fallback implementation (used by the parity
tests and the kernel benchmark).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("MTJRNG_PURE") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

IMPL = _impl.IMPL
lfsr_fill = _impl.lfsr_fill
xoroshiro_fill = _impl.xoroshiro_fill
berlekamp_massey = _impl.berlekamp_massey
linear_complexity_blocks = _impl.linear_complexity_blocks
rank32_batch = _impl.rank32_batch

__all__ = [
    "IMPL",
    "lfsr_fill",
    "xoroshiro_fill",
    "berlekamp_massey",
    "linear_complexity_blocks",
    "rank32_batch",
]
