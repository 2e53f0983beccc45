"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementation is used.  Set ``WHITEHEAD_VC_BACKEND=python`` to force the
fallback (``cython`` makes a missing extension an error).
"""

from __future__ import annotations

import os

from . import _pykernels


def _load(choice: str):
    if choice == "python":
        return _pykernels
    try:
        from . import _ckernels
    except ImportError:
        if choice == "cython":
            raise
        return _pykernels
    return _ckernels


CHOICES = ("auto", "python", "cython")

_choice = os.environ.get("WHITEHEAD_VC_BACKEND", "auto").strip().lower()
if _choice not in CHOICES:
    raise ImportError(f"WHITEHEAD_VC_BACKEND must be auto, python or cython, not {_choice!r}")

kernels = _load(_choice)
BACKEND = kernels.BACKEND_NAME


def get_kernels(name: str | None = None):
    """Return a kernel module by name (``None`` gives the active one)."""
    if name is None:
        return kernels
    if name not in CHOICES:
        raise ValueError(f"unknown backend {name!r}; choose from {CHOICES}")
    return _load(name)
