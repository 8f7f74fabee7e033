"""roothall: Hall algebras of quiver representations over F_q, a concrete
2-periodic root-category model, and the Lie algebra built from its triangle
counts, with exhaustive verification on small instances."""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
