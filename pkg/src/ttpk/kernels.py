"""Kernel dispatch: compiled Cython core when importable, numpy otherwise.

Set ``TTPK_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
if not os.environ.get("TTPK_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

rotation_costs = _impl.rotation_costs
held_karp = _impl.held_karp
ttp_search = _impl.ttp_search
