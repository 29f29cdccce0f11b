"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``COVSELECT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import SolverTimeout

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("COVSELECT_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

AtomTable = _impl.AtomTable
min_hitting_set = _impl.min_hitting_set

__all__ = ["AtomTable", "BACKEND", "SolverTimeout", "min_hitting_set"]
