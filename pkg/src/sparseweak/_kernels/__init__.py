"""Hot-kernel backend selection.

Prefers the compiled Cython module and falls back to the NumPy
implementation.  Set SPARSEWEAK_KERNELS=py (or =c) to force a backend;
forcing the compiled backend raises if it is not built.
"""

import os

_forced = os.environ.get("SPARSEWEAK_KERNELS", "").strip().lower()

if _forced in ("py", "python", "numpy"):
    from ._pykernels import BACKEND, frac_integral_1d, range_add, suffix_max_box
else:
    try:
        from ._ckernels import BACKEND, frac_integral_1d, range_add, suffix_max_box
    except ImportError:
        if _forced in ("c", "compiled", "cython"):
            raise
        from ._pykernels import BACKEND, frac_integral_1d, range_add, suffix_max_box


def backend_name():
    return BACKEND


__all__ = ["BACKEND", "backend_name", "frac_integral_1d", "range_add", "suffix_max_box"]
