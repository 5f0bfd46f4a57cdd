"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``HFTKYLE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("HFTKYLE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

horner = _impl.horner
horner_deriv = _impl.horner_deriv
horner_comp = _impl.horner_comp
bracket_root = _impl.bracket_root
accumulate_paths = _impl.accumulate_paths

N_SUMS = _kernels_py.N_SUMS
SUM_NAMES = _kernels_py.SUM_NAMES
fsum_rows = _kernels_py.fsum_rows
