"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``SEMIK_PURE_PYTHON=1`` is set, the reference ``_pykernels`` twin runs.
Callers pass nested sequences or numpy arrays and always get plain Python
results back.
"""

import os

import numpy as np

from semik import _pykernels

NEG = _pykernels.NEG

_ckernels = None
if os.environ.get("SEMIK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from semik import _ckernels
    except ImportError:  # extension not built
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def _arr(x, ndim):
    a = np.ascontiguousarray(np.asarray(x, dtype=np.int64))
    if a.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d integer array, got shape {a.shape}")
    return a


def _lists(x):
    return x.tolist() if isinstance(x, np.ndarray) else [list(r) for r in x]


class _Backend:
    """One kernel implementation behind a uniform calling convention."""

    def __init__(self, name):
        self.name = name
        self._c = name == "cython"
        if self._c and _ckernels is None:
            raise RuntimeError("compiled kernels are not available")

    def congruence_closure(self, add, act, labels, seeds=()):
        if self._c:
            seeds = np.asarray(list(seeds), dtype=np.int64).reshape(-1, 2)
            return _ckernels.congruence_closure(
                _arr(add, 2), _arr(act, 2), _arr(labels, 1), np.ascontiguousarray(seeds)
            )
        return _pykernels.congruence_closure(_lists(add), _lists(act), list(labels), list(seeds))

    def table_axiom_violation(self, add, mul, zero, one):
        if self._c:
            return _ckernels.table_axiom_violation(_arr(add, 2), _arr(mul, 2), zero, one)
        return _pykernels.table_axiom_violation(_lists(add), _lists(mul), zero, one)

    def join_violation(self, join, bottom):
        if self._c:
            return _ckernels.join_violation(_arr(join, 2), bottom)
        return _pykernels.join_violation(_lists(join), bottom)

    def distributive_violation(self, join, meet):
        if self._c:
            return _ckernels.distributive_violation(_arr(join, 2), _arr(meet, 2))
        return _pykernels.distributive_violation(_lists(join), _lists(meet))

    def extend_morphism(self, add1, mul1, add2, mul2, img):
        """Returns ``(ok, img)`` with ``img`` a new list."""
        if self._c:
            buf = np.array(img, dtype=np.int64)
            ok = _ckernels.extend_morphism(_arr(add1, 2), _arr(mul1, 2), _arr(add2, 2), _arr(mul2, 2), buf)
            return bool(ok), buf.tolist()
        buf = list(img)
        ok = _pykernels.extend_morphism(_lists(add1), _lists(mul1), _lists(add2), _lists(mul2), buf)
        return bool(ok), buf

    def maxplus_grid_images(self, mat, values, start, stop):
        if self._c:
            return _ckernels.maxplus_grid_images(_arr(mat, 2), _arr(values, 1), start, stop)
        return _pykernels.maxplus_grid_images(_lists(mat), list(values), start, stop)


def backend(name=None):
    """Kernel implementation by name (``"cython"`` or ``"python"``)."""
    return _Backend(name or BACKEND)


def available_backends():
    return ["cython", "python"] if _ckernels is not None else ["python"]


_default = _Backend(BACKEND)
congruence_closure = _default.congruence_closure
table_axiom_violation = _default.table_axiom_violation
join_violation = _default.join_violation
distributive_violation = _default.distributive_violation
extend_morphism = _default.extend_morphism
maxplus_grid_images = _default.maxplus_grid_images
