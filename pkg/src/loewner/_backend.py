"""Import-time selection of the chordal kernel backend.

The compiled extension is preferred when present; the numpy fallback keeps
the package fully functional without a build step.  Set LOEWNER_BACKEND to
"python" (or "numpy") to force the fallback, or to "cython" (or "compiled")
to require the extension and fail loudly if it is missing.
"""

from __future__ import annotations

import os

from . import _chordal_numpy

_requested = os.environ.get("LOEWNER_BACKEND", "auto").strip().lower()

if _requested in ("python", "numpy", "py"):
    kernels = _chordal_numpy
elif _requested in ("auto", "", "cython", "compiled", "c"):
    try:
        from . import _chordal_kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _requested not in ("auto", ""):
            raise ImportError(
                "LOEWNER_BACKEND requested the compiled kernels but "
                "loewner._chordal_kernels is not built")
        kernels = _chordal_numpy
else:
    raise ImportError(f"unrecognized LOEWNER_BACKEND value {_requested!r}")


def backend_name() -> str:
    """Name of the active kernel backend, "cython" or "numpy"."""
    return kernels.BACKEND_NAME
