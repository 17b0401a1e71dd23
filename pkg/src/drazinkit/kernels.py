"""Backend selection for the modular hot loops.

The compiled ``_kernels`` extension is used when it was built and the
modulus fits its int64 arithmetic; otherwise the pure-Python twin in
``_pykernels`` runs. Set ``DRAZINKIT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

_compiled = None
if not os.environ.get("DRAZINKIT_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_LIMIT = 2 ** 31


def _pick(p):
    if _compiled is not None and p < _LIMIT:
        return _compiled
    return _pykernels


def matmul_mod(a, b, n, m, k, p):
    return _pick(p).matmul_mod(a, b, n, m, k, p)


def rref_mod(a, rows, cols, p, pivot_limit=None):
    if pivot_limit is None:
        pivot_limit = cols
    return _pick(p).rref_mod(a, rows, cols, p, pivot_limit)


def rank_mod(a, rows, cols, p):
    return _pick(p).rank_mod(a, rows, cols, p)
