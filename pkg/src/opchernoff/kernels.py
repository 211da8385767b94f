"""Backend selection for the quadrature hot loop.

The compiled extension ``_kernels`` is used when it imports; otherwise the
pure-Python ``_kernels_py`` is used. Set ``OPCHERNOFF_PURE_PYTHON=1`` to
force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if os.environ.get("OPCHERNOFF_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py

catalog_integral = _impl.catalog_integral
eval_integrand = _impl.eval_integrand


def get_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            from . import _kernels  # raises ImportError when not built
            return _kernels
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def compiled_available() -> bool:
    try:
        get_backend("cython")
    except ImportError:
        return False
    return True
