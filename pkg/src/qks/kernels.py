"""Backend selection for the block-reduction kernels.

The compiled extension is preferred when importable; setting
QKS_PURE_PYTHON=1 forces the numpy fallback (handy for benchmarking and
debugging).  Both backends expose identical signatures and are
cross-tested for agreement, so callers never need to know which one is
active.
"""

import os

from . import _kernels_py


def _select():
    if os.environ.get("QKS_PURE_PYTHON", "").strip() not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels
        return _kernels, "compiled"
    except ImportError:
        return _kernels_py, "python"


_impl, _BACKEND = _select()

zeeman_block_terms = _impl.zeeman_block_terms
block_reduce = _impl.block_reduce


def backend_name():
    """Active kernel backend: "compiled" or "python"."""
    return _BACKEND
