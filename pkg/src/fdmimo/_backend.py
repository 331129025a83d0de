"""Selects the sampling-kernel backend at import time.

FDMIMO_BACKEND=auto     compiled extension if importable, else numpy (default)
FDMIMO_BACKEND=python   force the numpy kernels
FDMIMO_BACKEND=compiled require the extension; ImportError if missing

Both backends expose the same module-level functions and are bitwise
interchangeable; see tests/test_backends.py.
"""

from __future__ import annotations

import os

_choice = os.environ.get("FDMIMO_BACKEND", "auto").strip().lower()

if _choice not in ("auto", "python", "compiled"):
    raise ValueError(
        f"FDMIMO_BACKEND must be auto, python or compiled, got {_choice!r}")

if _choice == "python":
    from . import _kernels_py as kernels
elif _choice == "compiled":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND_NAME: str = kernels.BACKEND
