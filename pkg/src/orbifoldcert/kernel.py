"""Select the arithmetic kernel backend at import time.

Prefers the compiled extension and falls back to the pure-Python twin.
Set ORBIFOLDCERT_PURE=1 to force the fallback (used by the benchmark and
by tests that cross-check the two implementations).
"""

import os

if os.environ.get("ORBIFOLDCERT_PURE"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

BACKEND = _impl.BACKEND

vnormalize = _impl.vnormalize
viszero = _impl.viszero
vneg = _impl.vneg
vadd = _impl.vadd
vsub = _impl.vsub
vscale = _impl.vscale
vmul = _impl.vmul
vaddmul = _impl.vaddmul


def backend_name() -> str:
    return BACKEND
