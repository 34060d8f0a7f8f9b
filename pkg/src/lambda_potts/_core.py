"""Kernel backend selection: compiled extension if importable, else numpy."""

import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("LAMBDA_POTTS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass


def available_backends() -> dict:
    out = {"python": _fallback}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
