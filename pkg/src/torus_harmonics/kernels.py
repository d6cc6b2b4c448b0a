"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``TORUS_HARMONICS_PURE=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
if os.environ.get("TORUS_HARMONICS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

arc_maximal = _impl.arc_maximal
pair_sum = _impl.pair_sum
