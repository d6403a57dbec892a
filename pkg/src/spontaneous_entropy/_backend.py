"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise, or when
``SPONTANEOUS_ENTROPY_BACKEND=python`` is set, the numpy implementations in
``_kernels_py`` are used. Both expose ``integrate``, ``plogp_sum`` and
``shell_entropy`` with identical signatures.
"""
from __future__ import annotations

import logging
import os
from types import ModuleType

from . import _kernels_py

log = logging.getLogger(__name__)

BACKEND_ENV = "SPONTANEOUS_ENTROPY_BACKEND"


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _kernels


compiled = _load_compiled()

_requested = os.environ.get(BACKEND_ENV, "auto").lower()
if _requested == "python" or compiled is None:
    if _requested == "compiled":
        log.warning("compiled kernels requested but not built; using numpy fallback")
    kernels: ModuleType = _kernels_py
    name = "python"
else:
    kernels = compiled
    name = "compiled"


def get(backend: str | None = None) -> ModuleType:
    """Return a kernel module: ``None`` for the active one, or 'python'/'compiled'."""
    if backend is None:
        return kernels
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        if compiled is None:
            raise RuntimeError("compiled kernels are not built (pip install -e .)")
        return compiled
    raise ValueError(f"unknown backend {backend!r}")
