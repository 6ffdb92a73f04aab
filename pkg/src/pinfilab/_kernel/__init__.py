"""Hot loops of the simulator and phase mapper.

The compiled extension ``_ckernel`` is used when it was built and
``PINFILAB_PURE_PYTHON`` is unset; otherwise the pure-Python reference
``_pykernel`` is loaded.  Both expose ``run_kernel`` and ``classify_grid``
with identical signatures and bitwise-identical results.
"""
import os

from . import _pykernel

if os.environ.get("PINFILAB_PURE_PYTHON"):
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl
    except ImportError:
        _impl = _pykernel

COMPILED = _impl is not _pykernel
BACKEND = "cython" if COMPILED else "python"

run_kernel = _impl.run_kernel
classify_grid = _impl.classify_grid


def backends():
    """Available implementations by name, compiled one first when present."""
    found = {}
    try:
        from . import _ckernel

        found["cython"] = _ckernel
    except ImportError:
        pass
    found["python"] = _pykernel
    return found
