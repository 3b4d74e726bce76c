"""Select the numeric kernel backend at import time.

The compiled extension ``dzw._kernels`` is used when present; otherwise the
pure-Python twin ``dzw._kernels_py`` takes over.  Setting ``DZW_PURE_PYTHON``
to a nonempty value forces the fallback (useful for benchmarking and
debugging).
"""

import os

if os.environ.get("DZW_PURE_PYTHON"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"

exp_dirichlet_sum = kernels.exp_dirichlet_sum
sym_power_row_sums = kernels.sym_power_row_sums
