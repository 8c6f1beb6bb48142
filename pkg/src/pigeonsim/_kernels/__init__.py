"""Kernel backend selection.

The compiled extension is preferred when present; the numpy backend is the
fallback.  Set PIGEONSIM_KERNELS=python or PIGEONSIM_KERNELS=compiled to
force a choice (forcing `compiled` raises if the extension is missing).
"""

import os

from .pykernels import OP_CX, OP_H, OP_MEASURE, OP_S, OP_SDG, OP_X, OP_Z

_choice = os.environ.get("PIGEONSIM_KERNELS", "auto").strip().lower()

if _choice in ("", "auto"):
    try:
        from . import _ckernels as impl

        BACKEND = "compiled"
    except ImportError:
        from . import pykernels as impl

        BACKEND = "python"
elif _choice == "compiled":
    from . import _ckernels as impl

    BACKEND = "compiled"
elif _choice in ("python", "numpy"):
    from . import pykernels as impl

    BACKEND = "python"
else:
    raise ValueError(
        f"PIGEONSIM_KERNELS must be 'auto', 'compiled' or 'python', got {_choice!r}"
    )

apply_1q = impl.apply_1q
apply_cx = impl.apply_cx
prob_of = impl.prob_of
project = impl.project
norm_sq = impl.norm_sq
scale = impl.scale
inner = impl.inner
sample_shots = impl.sample_shots


def active_backend():
    """Name of the kernel backend selected at import: 'compiled' or 'python'."""
    return BACKEND
