"""Backend selection for the hot loops.

The compiled extension ``nlgames._kernels`` is used when it imports;
otherwise (or when ``NLGAMES_PURE_PYTHON=1``) the NumPy fallback is used.
"""
import importlib
import os

from . import _kernels_py


def load_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("nlgames._kernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if os.environ.get("NLGAMES_PURE_PYTHON", "") not in ("", "0"):
        return "python", _kernels_py
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", _kernels_py


BACKEND, _impl = _select()

payoff_block = _impl.payoff_block
best_response = _impl.best_response
circle_moduli = _impl.circle_moduli
