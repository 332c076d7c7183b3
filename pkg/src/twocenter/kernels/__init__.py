"""Kernel backend selection: compiled extension if available, else pure Python.

Set TWOCENTER_PURE=1 to force the pure-Python stepper (used by the benchmark
and by CI environments without a C compiler).
"""
from __future__ import annotations

import os

from . import models  # noqa: F401  (re-exported)

if os.environ.get("TWOCENTER_PURE", "") not in ("", "0"):
    from . import pure as _backend
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _backend

propagate = _backend.propagate
BACKEND = _backend.BACKEND


def backend_name() -> str:
    """Which stepper implementation is active ("compiled" or "pure")."""
    return BACKEND
