"""Select the compiled kernels when importable, else the numpy fallback.

Set ``LAPBOUND_PURE=1`` to force the fallback (used by the benchmark and by
the backend-agreement tests).
"""

import os

from . import _pycore

pure = _pycore

if os.environ.get("LAPBOUND_PURE", "") not in ("", "0"):
    core = _pycore
    NAME = "python"
else:
    try:
        from . import _core as core
        NAME = "compiled"
    except ImportError:
        core = _pycore
        NAME = "python"

compiled = core if NAME == "compiled" else None

tail_integral = core.tail_integral
tail_derivative = core.tail_derivative
tail_quad = core.tail_quad
kernel_matrix = core.kernel_matrix
tail_scalar = core.tail_scalar
tail_derivative_scalar = core.tail_derivative_scalar
