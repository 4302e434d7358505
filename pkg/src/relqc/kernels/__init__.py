"""State-vector kernels with a compiled core and a numpy fallback.

The Cython build is used when importable. Set ``RELQC_PURE_PYTHON=1`` to force
the numpy implementation.
"""
from __future__ import annotations

import os

from . import _py

BACKENDS = {"python": _py}

try:
    from . import _cy  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _cy = None
else:
    BACKENDS["cython"] = _cy

if _cy is not None and not os.environ.get("RELQC_PURE_PYTHON"):
    BACKEND = "cython"
    _impl = _cy
else:
    BACKEND = "python"
    _impl = _py

apply_pauli = _impl.apply_pauli
bell_project = _impl.bell_project
basis_project = _impl.basis_project

__all__ = ["BACKEND", "BACKENDS", "apply_pauli", "basis_project", "bell_project"]
