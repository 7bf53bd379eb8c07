"""Kernel backend selection.

The compiled extension is used when importable. Setting ``FRACBS_BACKEND``
to ``python`` forces the fallback; setting it to ``compiled`` makes a
missing extension an import error instead of a silent fallback.
"""
from __future__ import annotations

import logging
import os
from types import ModuleType

from fracbs import _kernels_py

log = logging.getLogger(__name__)

try:
    from fracbs import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_requested = os.environ.get("FRACBS_BACKEND", "").strip().lower()
if _requested not in ("", "python", "compiled"):
    raise ImportError(f"FRACBS_BACKEND must be 'python' or 'compiled', got {_requested!r}")
if _requested == "compiled" and _compiled is None:
    raise ImportError("FRACBS_BACKEND=compiled but fracbs._kernels is not built")

if _compiled is not None and _requested != "python":
    kernels: ModuleType = _compiled
    BACKEND = "compiled"
else:
    kernels = _kernels_py
    BACKEND = "python"
log.debug("fracbs kernel backend: %s", BACKEND)


def available() -> list[str]:
    """Names of the backends usable in this process."""
    return ["compiled", "python"] if _compiled is not None else ["python"]


def get(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``name`` (default: the selected one)."""
    if name is None:
        return kernels
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ValueError("compiled backend is not available (extension not built)")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def name_of(module: ModuleType) -> str:
    return "compiled" if _compiled is not None and module is _compiled else "python"
