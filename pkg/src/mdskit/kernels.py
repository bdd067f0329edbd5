"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``MDSKIT_PURE=1`` to force the fallback.
"""
import os

from . import _pycore

BACKEND = "python"
_impl = _pycore

if os.environ.get("MDSKIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

path_lengths = _impl.path_lengths
find_cycle = _impl.find_cycle
reachable = _impl.reachable
enumerate_mds = _impl.enumerate_mds
valid_f_moves = _impl.valid_f_moves
