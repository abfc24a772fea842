"""Brown-Gitler polynomials f_j (in R) and f'_j (in R'), and the golden tables."""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from importlib import resources

from .ring import (Gen, RingElement, RingId, embed_gprime, normalize, parse_element,
                   pow_, project_mod_y)

DEFAULT_MEMO_BOUND = 256


@dataclass(frozen=True)
class BGPolynomial:
    j: int
    value: RingElement

    def __str__(self):
        return str(self.value)


class _Memo:
    """Per-ring memo table; lock-guarded so concurrent readers see a consistent map."""

    def __init__(self, ring: RingId, bound: int = DEFAULT_MEMO_BOUND):
        self.ring = ring
        self.bound = bound
        self._table: dict[int, RingElement] = {}
        self._lock = threading.Lock()

    def get(self, j: int) -> RingElement:
        with self._lock:
            hit = self._table.get(j)
        if hit is not None:
            return hit
        value = self._compute(j)
        if j <= self.bound:
            with self._lock:
                self._table.setdefault(j, value)
        return value

    def _compute(self, j: int) -> RingElement:
        ring = self.ring
        if j == 0:
            return RingElement.one(ring)
        if j == 1:
            return RingElement.x(ring)
        half, odd = divmod(j, 2)
        if odd:
            # f_{2h+1} = t^h x f_h
            return RingElement.monomial(ring, Gen.X, t=half) * self.get(half)
        # f_{2h} = t^h f_h + t^{h+1} s f_{h-1}
        return (RingElement.t(ring, half) * self.get(half)
                + RingElement.monomial(ring, Gen.ONE, s=1, t=half + 1) * self.get(half - 1))


_MEMOS = {RingId.R: _Memo(RingId.R), RingId.RPRIME: _Memo(RingId.RPRIME)}


def bg_poly(j: int) -> BGPolynomial:
    if j < 0:
        raise ValueError("j must be nonnegative")
    return BGPolynomial(j, _MEMOS[RingId.R].get(j))


def bg_poly_gloc(j: int) -> BGPolynomial:
    if j < 0:
        raise ValueError("j must be nonnegative")
    return BGPolynomial(j, _MEMOS[RingId.RPRIME].get(j))


def power_table(k_max: int, ring: RingId = RingId.R) -> list[tuple[int, RingElement]]:
    if k_max < 3:
        raise ValueError("k_max must be at least 3")
    x = RingElement.x(ring)
    return [(k, pow_(x, k)) for k in range(3, k_max + 1)]


def parity_violations(j: int) -> list[str]:
    """Deviations of f'_j from the even/odd shape; empty means the shape holds.

    Even j: terms a s^i t^j + b s^i t^(j-1) x + c s^i t^(j-2) x^2.
    Odd j:  the same without constant terms.  All coefficients nonnegative.
    """
    f = bg_poly_gloc(j).value
    problems = []
    expected_t = {Gen.ONE: j, Gen.X: j - 1, Gen.X2: j - 2}
    for mono, c in f.items():
        if mono.gen is Gen.Y:
            problems.append(f"y-term {mono}")
            continue
        if c < 0:
            problems.append(f"negative coefficient {c} on {mono}")
        if mono.t_exp != expected_t[mono.gen]:
            problems.append(f"t-exponent {mono.t_exp} on {mono.gen.name}, expected {expected_t[mono.gen]}")
        if j % 2 == 1 and mono.gen is Gen.ONE:
            problems.append(f"constant term s^{mono.s_exp} t^{mono.t_exp} for odd j")
    return problems


def verify_parity(j: int) -> bool:
    return not parity_violations(j)


def compare_mod_y(j: int) -> bool:
    return project_mod_y(bg_poly(j).value) == embed_gprime(bg_poly_gloc(j).value)


def nonnegative(j: int) -> bool:
    return all(c > 0 for _, c in bg_poly(j).value.items()) and \
        all(c > 0 for _, c in bg_poly_gloc(j).value.items())


# ---------------------------------------------------------------------------
# golden tables

_ROW = re.compile(r"^\s*(?P<lhs>[xf])(?:_|\^)\{?(?P<k>\d+)\}?\s*=\s*(?P<rhs>.+?)\s*$")


def load_table(name: str) -> dict[int, str]:
    """Rows of a golden table file as {index: right-hand side text}."""
    text = resources.files("tmfres.data.tables").joinpath(name).read_text()
    rows = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _ROW.match(line)
        if not m:
            raise ValueError(f"bad table row: {line!r}")
        rows[int(m.group("k"))] = m.group("rhs")
    return rows


@dataclass
class TableDiff:
    index: int
    printed: str
    computed: RingElement
    missing: dict      # terms printed but not computed (key -> printed coeff)
    extra: dict        # terms computed but not printed (key -> computed coeff)
    changed: dict      # key -> (printed, computed)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.changed)


def _diff(index: int, printed: str, computed: RingElement) -> TableDiff:
    # printed text may repeat a monomial; normalize merges them
    want = normalize(parse_element(printed), computed.ring).terms
    got = computed.terms
    missing = {k: v for k, v in want.items() if k not in got}
    extra = {k: v for k, v in got.items() if k not in want}
    changed = {k: (want[k], got[k]) for k in want.keys() & got.keys() if want[k] != got[k]}
    return TableDiff(index, printed, computed, missing, extra, changed)


def compare_table1(k_max: int = 16) -> list[TableDiff]:
    rows = load_table("table1.txt")
    return [_diff(k, rows[k], v) for k, v in power_table(k_max) if k in rows]


def compare_table2(j_max: int = 16) -> list[TableDiff]:
    rows = load_table("table2.txt")
    return [_diff(j, rows[j], bg_poly(j).value) for j in range(1, j_max + 1) if j in rows]
