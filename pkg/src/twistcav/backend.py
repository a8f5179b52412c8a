"""Kernel backend selection.

The compiled extension ``twistcav._kernels`` is preferred when it
imports; otherwise the pure-Python twin ``twistcav._kernels_py`` is
used.  Setting the environment variable ``TWISTCAV_PURE_PYTHON=1``
before import forces the fallback (useful for benchmarking and
debugging).  Both backends implement the same contract and agree to
floating-point rounding.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("TWISTCAV_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

lindblad_rk4 = _impl.lindblad_rk4
bath_rk4 = _impl.bath_rk4


def backend_name() -> str:
    """\"compiled\" or \"python\", whichever is active."""
    return _impl.BACKEND


def using_compiled() -> bool:
    return _impl.BACKEND == "compiled"
