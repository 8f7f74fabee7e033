"""Kernel backend selection: compiled Cython core with pure-Python fallback.

Set ROOTHALL_PURE_KERNELS=1 to force the fallback (used by the benchmark and
by differential tests).
"""

import os

if os.environ.get("ROOTHALL_PURE_KERNELS"):
    from . import gfpure as impl

    BACKEND = "pure"
else:
    try:
        from . import gfcore as impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import gfpure as impl

        BACKEND = "pure"

mat_mul = impl.mat_mul
mat_add = impl.mat_add
mat_neg = impl.mat_neg
scal_mul = impl.scal_mul
axpy = impl.axpy
rank = impl.rank
rref = impl.rref
