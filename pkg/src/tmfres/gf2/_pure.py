"""Pure-Python GF(2) elimination on rows stored as Python ints (bit c = column c)."""

from __future__ import annotations


def _insert(pivots: dict, v: int, combo: int = 0):
    """Reduce v against a semi-reduced basis keyed by lowest set bit."""
    while v:
        low = v & -v
        hit = pivots.get(low)
        if hit is None:
            return v, combo
        v ^= hit[0]
        combo ^= hit[1]
    return 0, combo


def _back_substitute(pivots: dict) -> tuple[list[int], list[int]]:
    """Turn a semi-reduced basis into the fully reduced echelon form."""
    keys = sorted(pivots)
    pmask = 0
    for k in keys:
        pmask |= k
    rows = {k: pivots[k][0] for k in keys}
    # process from highest pivot down so each row only needs reduced rows
    for k in reversed(keys):
        v = rows[k]
        common = (v & pmask) & ~k
        while common:
            low = common & -common
            v ^= rows[low]
            common = (v & pmask) & ~k
        rows[k] = v
    return [rows[k] for k in keys], [k.bit_length() - 1 for k in keys]


def rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    pivots: dict = {}
    for r in rows:
        v, _ = _insert(pivots, r)
        if v:
            pivots[v & -v] = (v, 0)
    return _back_substitute(pivots)


def rank(rows: list[int], ncols: int) -> int:
    pivots: dict = {}
    n = 0
    for r in rows:
        v, _ = _insert(pivots, r)
        if v:
            pivots[v & -v] = (v, 0)
            n += 1
    return n


def echelon_kernel(rows: list[int], ncols: int) -> tuple[list[int], list[int], list[int]]:
    """Reduced echelon form of the row space, its pivot columns, and the
    reduced echelon basis of {c : sum_{i in c} rows[i] = 0} (bit i = row i)."""
    pivots: dict = {}
    kernel: list[int] = []
    for i, r in enumerate(rows):
        v, c = _insert(pivots, r, 1 << i)
        if v:
            pivots[v & -v] = (v, c)
        else:
            kernel.append(c)
    image, piv = _back_substitute(pivots)
    kernel, _ = rref(kernel, len(rows))
    return image, piv, kernel


def sparse_rank(rows, ncols: int) -> int:
    """Rank of rows given as collections of column indices."""
    pivots: dict[int, set] = {}
    for r in rows:
        r = set(r)
        while r:
            c = max(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            r ^= p
    return len(pivots)
