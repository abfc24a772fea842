"""Linear algebra over GF(2) on bit-packed rows.

Rows are Python ints (bit c is column c).  A compiled kernel is used when it
was built; otherwise the pure-Python implementation.  Both return the fully
reduced echelon forms, so results do not depend on the backend.
"""

from __future__ import annotations

import os

from . import _pure

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None
try:
    from . import _sparse
except ImportError:
    _sparse = None

_BACKENDS = {"python": _pure}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _BACKENDS["compiled" if _compiled is not None else "python"]
if os.environ.get("TMFRES_GF2_BACKEND") in _BACKENDS:
    _active = _BACKENDS[os.environ["TMFRES_GF2_BACKEND"]]


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend() -> str:
    return next(k for k, v in _BACKENDS.items() if v is _active)


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    _active = _BACKENDS[name]


def rref(rows, ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form (pivot = lowest column) and pivot columns."""
    return _active.rref(list(rows), ncols)


def rank(rows, ncols: int) -> int:
    return _active.rank(list(rows), ncols)


def echelon_kernel(rows, ncols: int) -> tuple[list[int], list[int], list[int]]:
    """(image echelon rows, pivot columns, kernel basis as row-index masks)."""
    return _active.echelon_kernel(list(rows), ncols)


def sparse_rank(rows, ncols: int) -> int:
    """Rank of rows given as collections of column indices."""
    if _active is not _pure and _sparse is not None:
        return _sparse.sparse_rank(rows, ncols)
    return _pure.sparse_rank(rows, ncols)


def bar_kernel():
    """The compiled bar-complex kernel class, or None on the Python backend."""
    if _active is not _pure and _sparse is not None:
        return _sparse.BarKernel
    return None


def nullspace(rows, ncols: int) -> list[int]:
    """Basis of {x : r . x = 0 for every row r}, as column masks."""
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = 1 << free
        for r, p in zip(red, piv):
            if (r >> free) & 1:
                x |= 1 << p
        out.append(x)
    return out


class Reducer:
    """Incrementally grown reduced basis; reduce() returns the normal form."""

    def __init__(self, rows=()):
        self._rows: dict[int, int] = {}   # pivot bit -> row
        self._mask = 0
        for r in rows:
            self.add(r)

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: int) -> int:
        common = v & self._mask
        while common:
            low = common & -common
            v ^= self._rows[low]
            common = v & self._mask
        return v

    def add(self, v: int) -> int:
        """Add v to the span; returns its reduced form (0 if already in the span)."""
        v = self.reduce(v)
        if not v:
            return 0
        low = v & -v
        for k, r in self._rows.items():
            if r & low:
                self._rows[k] = r ^ v
        self._rows[low] = v
        self._mask |= low
        return v

    def contains(self, v: int) -> bool:
        return not self.reduce(v)
