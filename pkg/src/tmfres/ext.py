"""Ext over A(2) of finite modules by minimal free resolution.

For a module M (the cohomology H^*X) this computes
Ext_{A(2)}^{s,t}(M, F2), whose basis is the set of degree-t generators of
the s-th stage of a minimal resolution.  Charts use n = t - s.

h_i-products are read off the minimal differentials: if d(g') contains
Sq^(2^i) g with coefficient 1, then h_i * g^* has a g'^* component.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field

from . import gf2
from . import milnor as A
from .errors import BudgetExceeded, WindowTooSmall
from .modules import SteenrodModule, apply
from .bar import bar_oracle  # noqa: F401  (re-exported oracle)

DEFAULT_CELL_BUDGET = int(os.environ.get("TMFRES_EXT_BUDGET", "200000"))

# position of each Milnor basis element inside its degree
_POS = [0] * 64
for _d, _idx in A.BY_DEGREE.items():
    for _p, _i in enumerate(_idx):
        _POS[_i] = _p
_DIM = [len(A.BY_DEGREE.get(d, ())) for d in range(A.TOP_DEGREE + 1)]
H_INDEX = {0: A.INDEX[(1, 0, 0)], 1: A.INDEX[(2, 0, 0)], 2: A.INDEX[(4, 0, 0)]}


def _adim(d: int) -> int:
    return _DIM[d] if 0 <= d <= A.TOP_DEGREE else 0


@dataclass
class ResolutionStage:
    s: int
    degrees: list[int] = field(default_factory=list)
    # d(g): for s = 0 a mask over the module basis, else a tuple of (milnor index, generator)
    differential: list = field(default_factory=list)


class _Layout:
    """Basis of a free module in one internal degree: (generator, Milnor element) pairs."""

    __slots__ = ("offsets", "size", "gens", "starts")

    def __init__(self, degrees: list[int], t: int):
        self.offsets = {}
        self.gens = []
        self.starts = []
        n = 0
        for g, deg in enumerate(degrees):
            k = _adim(t - deg)
            if k:
                self.offsets[g] = n
                self.gens.append(g)
                self.starts.append(n)
                n += k
        self.size = n

    def decode(self, mask: int, degrees: list[int], t: int) -> tuple:
        out = []
        for bit in A.bits(mask):
            g = self.gens[bisect_right(self.starts, bit) - 1]
            out.append((A.BY_DEGREE[t - degrees[g]][bit - self.offsets[g]], g))
        return tuple(out)


class Resolution:
    """Free resolution of a module, built one internal degree at a time.

    strategy "minimal" adds a generator only for kernel classes not already
    hit; "full" adds one for every kernel basis vector, giving a non-minimal
    resolution whose Ext comes from ``minimized_dims``.
    """

    def __init__(self, module: SteenrodModule, s_max: int, t_max: int,
                 budget: int = DEFAULT_CELL_BUDGET, strategy: str = "minimal"):
        if strategy not in ("minimal", "full"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.module = module
        self.s_max = s_max
        self.t_max = t_max
        self.budget = budget
        self.strategy = strategy
        self.stages = [ResolutionStage(s) for s in range(s_max + 1)]
        self.t_done = None

    # a * d(g) as a mask over the layout of stage s-1 in degree t
    def _image(self, s: int, g: int, a: int, layout: _Layout | None) -> int:
        d = self.stages[s].differential[g]
        if s == 0:
            return apply(self.module.milnor_ops[a], d)
        out = 0
        row = A.MULT[a]
        for b, h in d:
            prod = row[b]
            if prod:
                base = layout.offsets[h]
                for c in A.bits(prod):
                    out ^= 1 << (base + _POS[c])
        return out

    def compute(self) -> "Resolution":
        m = self.module
        if m.dim == 0:
            self.t_done = self.t_max
            return self
        for t in range(min(m.degrees), self.t_max + 1):
            self._step(t)
            self.t_done = t
        return self

    def _step(self, t: int):
        m = self.module
        prev_kernel: list[int] = []
        for s in range(self.s_max + 1):
            stage = self.stages[s]
            layout = _Layout(stage.degrees, t)
            if layout.size > self.budget:
                raise BudgetExceeded(f"stage {s}, degree {t}: {layout.size} cells", partial=self)
            target = _Layout(self.stages[s - 1].degrees, t) if s else None
            ncols = m.dim if s == 0 else target.size
            rows = []
            for g in layout.gens:
                for a in A.BY_DEGREE[t - stage.degrees[g]]:
                    rows.append(self._image(s, g, a, target))
            image, _, kernel = gf2.echelon_kernel(rows, ncols)
            red = gf2.Reducer(image)
            candidates = [1 << i for i in m.basis_in_degree(t)] if s == 0 else prev_kernel
            added = []
            for v in candidates:
                r = red.add(v)
                if self.strategy == "full":
                    r = v
                if r:
                    added.append(r)
                    stage.degrees.append(t)
                    if s == 0:
                        stage.differential.append(r)
                    else:
                        stage.differential.append(target.decode(r, self.stages[s - 1].degrees, t))
            if self.strategy == "full" and added:
                # redundant generators create kernel of their own
                _, _, kernel = gf2.echelon_kernel(rows + added, ncols)
            # otherwise new generators map injectively, so the kernel on the
            # old layout (a prefix of the new one) is the whole kernel
            prev_kernel = kernel

    def minimized_dims(self) -> dict[tuple[int, int], int]:
        """Ext dimensions from the cochain complex Hom_A(F_*, F2).

        Its coboundary only sees unit coefficients of the differentials, so
        for a minimal resolution it vanishes and this equals ext_dims().
        """
        unit_rank: dict[tuple[int, int], int] = {}
        for s in range(1, len(self.stages)):
            st = self.stages[s]
            by_t: dict[int, list[int]] = {}
            for g, t in enumerate(st.degrees):
                v = 0
                for a, h in st.differential[g]:
                    if a == A.UNIT:
                        v ^= 1 << h
                by_t.setdefault(t, []).append(v)
            for t, rows in by_t.items():
                unit_rank[(s, t)] = gf2.rank(rows, len(self.stages[s - 1].degrees))
        out = {}
        for (s, t), n in self.ext_dims().items():
            if s == len(self.stages) - 1:
                continue  # the top stage's outgoing rank is unknown
            d = n - unit_rank.get((s, t), 0) - unit_rank.get((s + 1, t), 0)
            if d:
                out[(s, t)] = d
        return out

    # --- outputs
    def ext_dims(self) -> dict[tuple[int, int], int]:
        out: Counter = Counter()
        for st in self.stages:
            for t in st.degrees:
                out[(st.s, t)] += 1
        return dict(sorted(out.items()))

    def generator_label(self, s: int, g: int) -> str:
        return f"x{s}_{g}"

    def hi_products(self) -> dict[tuple[int, int, int], list[int]]:
        """(i, s, g) -> generators g' of stage s+1 with h_i * g^* containing g'^*."""
        out: dict = {}
        for s in range(1, len(self.stages)):
            for gp, d in enumerate(self.stages[s].differential):
                for a, g in d:
                    for i, hi in H_INDEX.items():
                        if a == hi:
                            out.setdefault((i, s - 1, g), []).append(gp)
        return {k: sorted(v) for k, v in sorted(out.items())}

    def check_d_squared(self) -> bool:
        """d o d = 0 on every generator (s >= 1)."""
        m = self.module
        for s in range(1, len(self.stages)):
            for gp, d in enumerate(self.stages[s].differential):
                if s == 1:
                    v = 0
                    for a, g in d:
                        v ^= apply(m.milnor_ops[a], self.stages[0].differential[g])
                    if v:
                        return False
                    continue
                # d(d(g')) in stage s-2: sum over (a, g) of a * d(g)
                acc: dict = {}
                for a, g in d:
                    for b, h in self.stages[s - 1].differential[g]:
                        for c in A.bits(A.MULT[a][b]):
                            acc[(c, h)] = acc.get((c, h), 0) ^ 1
                if any(acc.values()):
                    return False
        return True

    def is_minimal(self) -> bool:
        return all(a != A.UNIT for st in self.stages[1:] for d in st.differential for a, _ in d)

    def dump(self) -> str:
        lines = []
        for st in self.stages:
            lines.append(f"stage {st.s}: {len(st.degrees)} generators")
            for g, (t, d) in enumerate(zip(st.degrees, st.differential)):
                if st.s == 0:
                    body = " + ".join(self.module.names[i] for i in A.bits(d))
                else:
                    body = " + ".join(f"{A.format_mask(1 << a)} x{st.s - 1}_{h}" for a, h in d)
                lines.append(f"  x{st.s}_{g} (t={t}) -> {body or '0'}")
        return "\n".join(lines) + "\n"


def minimal_resolution(m: SteenrodModule, s_max: int, t_max: int,
                       budget: int = DEFAULT_CELL_BUDGET, strategy: str = "minimal") -> Resolution:
    res = Resolution(m, s_max, t_max, budget, strategy).compute()
    if not res.check_d_squared():
        raise RuntimeError("d o d != 0")
    if strategy == "minimal" and not res.is_minimal():
        raise RuntimeError("resolution is not minimal")
    return res


@dataclass
class ExtChart:
    dims: dict[tuple[int, int], int]            # (s, t) -> dim
    products: dict[tuple[int, int, int], list[int]]  # (i, s, g) -> targets in stage s+1
    s_max: int
    t_max: int
    generators: dict[tuple[int, int], list[int]] = field(default_factory=dict)  # (s, t) -> indices

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def dim_nst(self, n: int, s: int) -> int:
        return self.dims.get((s, n + s), 0)

    def positions(self) -> list[tuple[int, int]]:
        """Nonzero (n, s) positions."""
        return sorted({(t - s, s) for (s, t), d in self.dims.items() if d})


def ext_dims(m: SteenrodModule, s_max: int, t_max: int, budget: int = DEFAULT_CELL_BUDGET
             ) -> ExtChart:
    res = minimal_resolution(m, s_max, t_max, budget)
    return chart_from_resolution(res)


def chart_from_resolution(res: Resolution) -> ExtChart:
    gens: dict = {}
    for st in res.stages:
        for g, t in enumerate(st.degrees):
            gens.setdefault((st.s, t), []).append(g)
    return ExtChart(res.ext_dims(), res.hi_products(), res.s_max, res.t_max, gens)


# ---------------------------------------------------------------------------
# v0-towers


@dataclass
class TowerReport:
    towers: dict[int, int]          # n -> number of infinite h0-towers
    expected: dict[int, int]
    n_max: int

    @property
    def ok(self) -> bool:
        return self.towers == self.expected


def monomial_count(n: int, gens=(8, 12)) -> int:
    """Number of monomials of degree n in F2[v1^4, v2^2] (degrees 8 and 12)."""
    count = 0
    a_deg, b_deg = gens
    for a in range(n // a_deg + 1):
        rest = n - a * a_deg
        if rest >= 0 and rest % b_deg == 0:
            count += 1
    return count


def expected_towers(generator_stems=(0,), n_max: int = 24) -> dict[int, int]:
    out: Counter = Counter()
    for g in generator_stems:
        for n in range(g, n_max + 1):
            c = monomial_count(n - g)
            if c:
                out[n] += c
    return dict(sorted(out.items()))


def v0_tower_report(chart: ExtChart, n_max: int, generator_stems=(0,), stable_rows: int = 3
                    ) -> TowerReport:
    """Towers = column dimensions that are constant and h0-connected over the
    top ``stable_rows`` filtrations of the window."""
    if chart.s_max < stable_rows or chart.t_max - chart.s_max < n_max:
        raise WindowTooSmall(f"need t_max - s_max >= {n_max} and s_max >= {stable_rows}")
    towers = {}
    top = chart.s_max
    for n in range(min(0, min((t - s for s, t in chart.dims), default=0)), n_max + 1):
        col = [chart.dim_nst(n, s) for s in range(top - stable_rows, top + 1)]
        if len(set(col)) != 1:
            raise WindowTooSmall(f"column n={n} has not stabilized: {col}")
        d = col[0]
        if d:
            # h0 must carry the top rows injectively onto each other
            for s in range(top - stable_rows, top):
                hit = set()
                for g in chart.generators.get((s, n + s), []):
                    hit.update(chart.products.get((0, s, g), []))
                if len(hit) != d:
                    raise WindowTooSmall(f"h0 not bijective at n={n}, s={s}")
            towers[n] = d
    return TowerReport(towers, expected_towers(generator_stems, n_max), n_max)


def tower_generators(towers: dict[int, int], gens=(8, 12)) -> Counter:
    """Stems of free F2[v1^4, v2^2]-generators producing the given tower counts."""
    out: Counter = Counter()
    for n in sorted(towers):
        explained = sum(k * monomial_count(n - g, gens) for g, k in out.items() if g <= n)
        extra = towers[n] - explained
        if extra < 0:
            raise ValueError(f"tower counts are not those of a free module (n={n})")
        if extra:
            out[n] = extra
    return out


def tmf03_model_tower_stems() -> list[int]:
    """Tower generator stems of Sigma^{24,2} of the TMF_0(3) model
    Sigma^{24,3} D bo_1 u Sigma^{24,4} bo_1.

    v0-locally the attaching map (an h2^2 multiple) vanishes, so the towers
    are those of the two pieces, read off from their Q0-Margolis homology.
    """
    from .comodule import bo_module
    from .modules import dual, margolis_homology
    bo = bo_module(1)
    stems = []
    for piece in (dual(bo), bo):
        for deg, k in margolis_homology(piece, "Q0").items():
            stems += [48 + deg] * k
    return sorted(stems)


# ---------------------------------------------------------------------------
# chart emission


def chart_csv(chart: ExtChart) -> str:
    lines = ["s,t,dim"]
    for (s, t), d in sorted(chart.dims.items()):
        if d:
            lines.append(f"{s},{t},{d}")
    return "\n".join(lines) + "\n"


def chart_text(chart: ExtChart, n_max: int | None = None) -> str:
    n_max = chart.t_max if n_max is None else n_max
    rows = []
    for s in range(chart.s_max, -1, -1):
        cells = []
        for n in range(0, n_max + 1):
            d = chart.dim_nst(n, s)
            cells.append(str(d) if d else ".")
        rows.append(f"{s:3d} | " + " ".join(f"{c:>2}" for c in cells))
    rows.append("    +-" + "-" * (3 * (n_max + 1)))
    rows.append("      " + " ".join(f"{n:>2}" for n in range(0, n_max + 1)))
    return "\n".join(rows) + "\n"


def chart_svg(chart: ExtChart, n_max: int | None = None, cell: int = 24) -> str:
    n_max = chart.t_max if n_max is None else n_max
    width = (n_max + 2) * cell
    height = (chart.s_max + 2) * cell
    pos = {}

    def xy(n, s, k, d):
        x = (n + 1) * cell + (k - (d - 1) / 2) * (cell / 4)
        y = height - (s + 1) * cell
        return round(x, 2), round(y, 2)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    for n in range(0, n_max + 1, 2):
        x = (n + 1) * cell
        out.append(f'<text x="{x}" y="{height - 4}" font-size="9" text-anchor="middle">{n}</text>')
    for (s, t), idx in sorted(chart.generators.items()):
        n = t - s
        if not 0 <= n <= n_max:
            continue
        for k, g in enumerate(idx):
            pos[(s, g)] = xy(n, s, k, len(idx))
    colors = {0: "black", 1: "blue", 2: "red"}
    for (i, s, g), targets in sorted(chart.products.items()):
        if (s, g) not in pos:
            continue
        x1, y1 = pos[(s, g)]
        for gp in targets:
            if (s + 1, gp) in pos:
                x2, y2 = pos[(s + 1, gp)]
                out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colors[i]}" '
                           f'stroke-width="1"/>')
    for (s, g), (x, y) in sorted(pos.items()):
        out.append(f'<circle cx="{x}" cy="{y}" r="2.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def chart_emit(chart: ExtChart, fmt: str = "TEXT", **kw) -> str:
    fmt = fmt.upper()
    if fmt == "CSV":
        return chart_csv(chart)
    if fmt == "SVG":
        return chart_svg(chart, **kw)
    if fmt == "TEXT":
        return chart_text(chart, **kw)
    raise ValueError(f"unknown chart format {fmt!r}")
