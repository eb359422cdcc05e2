"""Select the kernel implementation at import time.

Preference order: compiled extension, then the NumPy fallback.  Setting
COBOSE_PURE_PYTHON=1 forces the fallback (useful for benchmarking and for
debugging the kernels against each other).
"""

import os

_force_py = os.environ.get("COBOSE_PURE_PYTHON", "").strip().lower() not in {"", "0", "false"}

if _force_py:
    from . import _kernels_py as _impl

    BACKEND_NAME = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND_NAME = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND_NAME = "python"

logsumexp = _impl.logsumexp
chi_log_h_series = _impl.chi_log_h_series
convolve_log_h = _impl.convolve_log_h


def backend_name() -> str:
    return BACKEND_NAME
