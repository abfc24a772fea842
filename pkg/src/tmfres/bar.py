"""Independent Ext oracle: cohomology of the normalized bar complex.

For a module M over a sub-Hopf algebra B of A(2), Ext_B^{s,t}(M, F2) is the
cohomology of Hom(Bbar^{(x)s} (x) M, F2), dual to the chain complex with cells
[a1|...|as] m and boundary

    d[a1|...|as] m = sum_i [...|a_i a_{i+1}|...] m + [a1|...|a_{s-1}] (a_s m).

So dim Ext^{s,t} = #cells(s, t) - rank d_s - rank d_{s+1}.  Nothing here
shares code with the minimal resolver beyond the Milnor product table.  The
complex grows exponentially in t; the cell budget guards each (s, t) piece.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from . import gf2
from . import milnor as A
from .errors import BudgetExceeded
from .modules import SteenrodModule, apply, suspend

DEFAULT_BAR_BUDGET = int(os.environ.get("TMFRES_BAR_BUDGET", "5000000"))

# profiles (exponent bounds) of the sub-Hopf algebras in use
PROFILES = {"A2": (8, 4, 2), "A1": (4, 2, 1), "A0": (2, 1, 1)}


def algebra_basis(name: str = "A2") -> list[int]:
    prof = PROFILES[name]
    return [i for i, r in enumerate(A.BASIS) if all(e < p for e, p in zip(r, prof))]


@dataclass
class BarResult:
    dims: dict[tuple[int, int], int] = field(default_factory=dict)
    cells: dict[tuple[int, int], int] = field(default_factory=dict)
    ranks: dict[tuple[int, int], int] = field(default_factory=dict)
    t_done: int | None = None

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)


class BarComplex:
    def __init__(self, m: SteenrodModule, algebra: str = "A2", t_max: int = 24):
        self.m = m
        self.algebra = algebra
        self.t_max = t_max
        self.letters = [i for i in algebra_basis(algebra) if i != A.UNIT]  # sorted by degree
        self.letter_of = {b: k for k, b in enumerate(self.letters)}
        self.ldeg = [A.DEGREES[b] for b in self.letters]
        L = len(self.letters)
        self.prod = []
        for a in self.letters:
            for b in self.letters:
                terms = A.MULT[a][b]
                self.prod.append([self.letter_of[c] for c in A.bits(terms) if c in self.letter_of])
        ops = m.milnor_ops
        self.act = [list(A.bits(apply(ops[a], 1 << j))) for a in self.letters for j in range(m.dim)]
        self._count = {}
        self._kernel = None
        kern = gf2.bar_kernel()
        if kern is not None:
            self._kernel = kern(self.ldeg, list(m.degrees), self.prod, self.act, t_max)
        self._cells: dict = {}
        assert len(self.prod) == L * L

    def _words(self, s: int, d: int):
        if s == 0:
            if d == 0:
                yield ()
            return
        for k, deg in enumerate(self.ldeg):
            if deg > d:
                break
            for rest in self._words(s - 1, d - deg):
                yield (k,) + rest

    def count(self, s: int, t: int) -> int:
        key = (s, t)
        if key not in self._count:
            if self._kernel is not None:
                self._count[key] = self._kernel.count(s, t)
            else:
                self._count[key] = len(self.cells(s, t))
        return self._count[key]

    def cells(self, s: int, t: int) -> dict:
        """Cell -> index, in the same lexicographic order as the compiled kernel."""
        key = (s, t)
        if key not in self._cells:
            out = {}
            for mi, md in enumerate(self.m.degrees):
                if 0 <= t - md:
                    for w in self._words(s, t - md):
                        out[(w, mi)] = len(out)
            self._cells[key] = out
        return self._cells[key]

    def boundary_rows(self, s: int, t: int) -> list[set]:
        """Rows of d: C_s -> C_{s-1}, as sets of column indices."""
        src = self.cells(s, t)
        dst = self.cells(s - 1, t)
        L, D = len(self.letters), self.m.dim
        rows = []
        for (w, mi) in src:
            v: set = set()
            for i in range(s - 1):
                for c in self.prod[w[i] * L + w[i + 1]]:
                    v ^= {dst[(w[:i] + (c,) + w[i + 2:], mi)]}
            for mj in self.act[w[-1] * D + mi]:
                v ^= {dst[(w[:-1], mj)]}
            rows.append(v)
        return rows

    def rank(self, s: int, t: int) -> int:
        if s <= 0 or not self.count(s, t) or not self.count(s - 1, t):
            return 0
        if self._kernel is not None:
            return self._kernel.boundary_rank(s, t)
        return gf2.sparse_rank(self.boundary_rows(s, t), self.count(s - 1, t))

    def forget(self, t: int):
        self._cells = {k: v for k, v in self._cells.items() if k[1] != t}


def bar_oracle(m: SteenrodModule, s_max: int, t_max: int, algebra: str = "A2",
               budget: int = DEFAULT_BAR_BUDGET) -> BarResult:
    """Ext^{s,t} for s <= s_max, t <= t_max from the bar complex.

    BUDGET_EXCEEDED carries the result for all degrees finished so far.
    """
    res = BarResult()
    if m.dim == 0:
        res.t_done = t_max
        return res
    low = min(m.degrees)
    if low:
        # cells are counted from internal degree 0; shift and shift back
        try:
            inner = bar_oracle(suspend(m, -low), s_max, t_max - low, algebra, budget)
        except BudgetExceeded as exc:
            t, cells = exc.info["t"] + low, exc.info["cells"]
            raise BudgetExceeded(f"bar complex in degree {t} has a piece of {cells} cells "
                                 f"(budget {budget})", partial=_shift(exc.partial, low),
                                 t=t, cells=cells) from None
        return _shift(inner, low)
    bc = BarComplex(m, algebra, t_max)
    for t in range(low, t_max + 1):
        top = min(s_max, t - low)
        sizes = {s: bc.count(s, t) for s in range(top + 2)}
        worst = max(sizes.values())
        if worst > budget:
            raise BudgetExceeded(f"bar complex in degree {t} has a piece of {worst} cells "
                                 f"(budget {budget})", partial=res, t=t, cells=worst)
        ranks = {s: bc.rank(s, t) for s in range(top + 2)}
        for s in range(top + 1):
            res.cells[(s, t)] = sizes[s]
            res.ranks[(s, t)] = ranks[s]
            d = sizes[s] - ranks[s] - ranks[s + 1]
            if d:
                res.dims[(s, t)] = d
        bc.forget(t)
        res.t_done = t
    return res


def _shift(r: BarResult, k: int) -> BarResult:
    move = lambda d: {(s, t + k): v for (s, t), v in d.items()}
    return BarResult(move(r.dims), move(r.cells), move(r.ranks),
                     None if r.t_done is None else r.t_done + k)
