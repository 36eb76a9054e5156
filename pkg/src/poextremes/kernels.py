"""Backend selection for the generator kernels.

The compiled extension is used when it was built and imports cleanly;
setting ``POEXTREMES_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from poextremes import _kernels_py
from poextremes._kernels_py import D_MAX, INDEPENDENCE, NELSEN_4_2_8, NELSEN_4_2_19
from poextremes._kernels_py import _log_shift as log_shift

_impl = _kernels_py
BACKEND = "python"

if not os.environ.get("POEXTREMES_PURE_PYTHON"):
    try:
        from poextremes import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

combine = _impl.combine
partials = _impl.partials
conditional_inverse = _impl.conditional_inverse

__all__ = [
    "BACKEND",
    "D_MAX",
    "INDEPENDENCE",
    "NELSEN_4_2_19",
    "NELSEN_4_2_8",
    "combine",
    "conditional_inverse",
    "log_shift",
    "partials",
]
