"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``ABLOC_DISABLE_NUMBA`` is unset or ``0``. ``BACKEND`` names the
path in use.
"""
import os

from . import _numpy

_disabled = os.environ.get("ABLOC_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

_impl = _numpy
BACKEND = "numpy"
if not _disabled:
    try:
        from . import _numba as _impl  # noqa: F811

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba missing
        _impl = _numpy

cholesky_solve = _impl.cholesky_solve
gram = _impl.gram
cross_products = _impl.cross_products
batched_ridge_solve = _impl.batched_ridge_solve
predict = _impl.predict
residual_power = _impl.residual_power
weighted_sum = _impl.weighted_sum

__all__ = [
    "BACKEND",
    "cholesky_solve",
    "gram",
    "cross_products",
    "batched_ridge_solve",
    "predict",
    "residual_power",
    "weighted_sum",
]
