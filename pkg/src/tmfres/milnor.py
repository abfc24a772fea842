"""The subalgebra A(2) of the mod 2 Steenrod algebra in the Milnor basis.

Basis elements are triples ``(r1, r2, r3)`` with r1 < 8, r2 < 4, r3 < 2 and
degree ``r1 + 3 r2 + 7 r3``.  Elements of A(2) are stored internally as
64-bit masks over the basis; the public API also accepts frozensets of
triples.  All tables are built once at import and are read-only afterwards.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as _iproduct
from typing import Iterable

PROFILE = (8, 4, 2)
MilnorElement = tuple  # (r1, r2, r3)


def degree(r: MilnorElement) -> int:
    return r[0] + 3 * r[1] + 7 * r[2]


BASIS: tuple[MilnorElement, ...] = tuple(sorted(
    _iproduct(range(8), range(4), range(2)), key=lambda r: (degree(r), r)))
INDEX = {r: i for i, r in enumerate(BASIS)}
DEGREES = tuple(degree(r) for r in BASIS)
TOP_DEGREE = max(DEGREES)
UNIT = INDEX[(0, 0, 0)]

# basis indices grouped by degree
BY_DEGREE: dict[int, tuple[int, ...]] = {}
for _i, _d in enumerate(DEGREES):
    BY_DEGREE.setdefault(_d, ())
    BY_DEGREE[_d] += (_i,)


def poincare_series() -> list[int]:
    return [len(BY_DEGREE.get(d, ())) for d in range(TOP_DEGREE + 1)]


def in_profile(r: Iterable[int]) -> bool:
    r = tuple(r)
    if any(r[3:]):
        return False
    r = (r + (0, 0, 0))[:3]
    return all(0 <= e < p for e, p in zip(r, PROFILE))


def _binom_odd(parts) -> bool:
    """Multinomial coefficient mod 2: odd iff the binary digits are disjoint."""
    seen = 0
    for p in parts:
        if seen & p:
            return False
        seen |= p
    return True


def _matrices(r: tuple, s: tuple):
    """Milnor matrices with row weights r and column sums s (3 x 3 interior)."""
    # rows i = 1..3, columns j = 1..3; x[i][j] with sum_j 2^j x[i][j] <= r_i
    rows = [[]]
    for i in range(3):
        new = []
        for partial in rows:
            ri = r[i]
            for a in range(ri // 2 + 1):
                for b in range((ri - 2 * a) // 4 + 1):
                    for c in range((ri - 2 * a - 4 * b) // 8 + 1):
                        new.append(partial + [(ri - 2 * a - 4 * b - 8 * c, a, b, c)])
        rows = new
    for m in rows:
        top = []
        ok = True
        for j in range(1, 4):
            col = s[j - 1] - sum(m[i][j] for i in range(3))
            if col < 0:
                ok = False
                break
            top.append(col)
        if ok:
            yield top, m


def _raw_product(r: tuple, s: tuple) -> dict:
    """Full Milnor product (not truncated), as {sequence: 1}."""
    out: dict = {}
    for top, m in _matrices(r, s):
        # full matrix X[i][j], i,j >= 0, X[0][0] ignored
        X = [[0] + top] + [list(row) for row in m]
        t = []
        ok = True
        for n in range(1, 7):
            diag = [X[i][n - i] for i in range(max(0, n - 3), min(n, 3) + 1)]
            if not _binom_odd(diag):
                ok = False
                break
            t.append(sum(diag))
        if not ok:
            continue
        while t and t[-1] == 0:
            t.pop()
        key = tuple(t)
        out[key] = out.get(key, 0) ^ 1
    return {k: 1 for k, v in out.items() if v}


def _build_table() -> list[list[int]]:
    table = [[0] * 64 for _ in range(64)]
    for i, r in enumerate(BASIS):
        for j, s in enumerate(BASIS):
            mask = 0
            for t in _raw_product(r, s):
                if in_profile(t):
                    mask ^= 1 << INDEX[(tuple(t) + (0, 0, 0))[:3]]
            table[i][j] = mask
    return table


MULT = _build_table()


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[MilnorElement]) -> int:
    m = 0
    for r in elements:
        m ^= 1 << INDEX[(tuple(r) + (0, 0, 0))[:3]]
    return m


def elements_of(mask: int) -> frozenset:
    return frozenset(BASIS[i] for i in bits(mask))


def mul_masks(a: int, b: int) -> int:
    out = 0
    for i in bits(a):
        row = MULT[i]
        for j in bits(b):
            out ^= row[j]
    return out


def milnor_product(a: MilnorElement, b: MilnorElement) -> frozenset:
    """Product of two Milnor basis elements, as a set of basis elements."""
    return elements_of(MULT[INDEX[tuple(a)]][INDEX[tuple(b)]])


def multiply(a, b) -> frozenset:
    """Product of two A(2) elements given as iterables of Milnor triples."""
    return elements_of(mul_masks(mask_of(a), mask_of(b)))


def sq(i: int) -> int:
    """Sq^i = Sq(i) as a mask (0 <= i <= 7)."""
    return 1 << INDEX[(i, 0, 0)]


def mask_degree(mask: int) -> int | None:
    degs = {DEGREES[i] for i in bits(mask)}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError("inhomogeneous element")
    return degs.pop()


def format_mask(mask: int) -> str:
    if not mask:
        return "0"
    parts = []
    for i in sorted(bits(mask), key=lambda k: (DEGREES[k], BASIS[k])):
        r = list(BASIS[i])
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        parts.append("Sq(" + ",".join(map(str, r)) + ")")
    return " + ".join(parts)


# named elements
Q0 = 1 << INDEX[(1, 0, 0)]
Q1 = 1 << INDEX[(0, 1, 0)]
Q2 = 1 << INDEX[(0, 0, 1)]
P21 = 1 << INDEX[(0, 2, 0)]
NAMED = {"Q0": Q0, "Q1": Q1, "Q2": Q2, "P21": P21}


# ---------------------------------------------------------------------------
# antipode and coproduct


@lru_cache(maxsize=None)
def _chi_index(i: int) -> int:
    if i == UNIT:
        return 1 << UNIT
    r = BASIS[i]
    # sum over R' <= R of Sq(R') chi(Sq(R - R')) = 0; isolate R' = 0
    acc = 0
    for a in range(r[0] + 1):
        for b in range(r[1] + 1):
            for c in range(r[2] + 1):
                rp = (a, b, c)
                if rp == (0, 0, 0):
                    continue
                rest = (r[0] - a, r[1] - b, r[2] - c)
                acc ^= mul_masks(1 << INDEX[rp], _chi_index(INDEX[rest]))
    return acc


def chi(mask: int) -> int:
    out = 0
    for i in bits(mask):
        out ^= _chi_index(i)
    return out


def coproduct(i: int) -> list[tuple[int, int]]:
    """Delta Sq(R) = sum_{R' + R'' = R} Sq(R') (x) Sq(R''), as index pairs."""
    r = BASIS[i]
    return [(INDEX[(a, b, c)], INDEX[(r[0] - a, r[1] - b, r[2] - c)])
            for a in range(r[0] + 1) for b in range(r[1] + 1) for c in range(r[2] + 1)]


# ---------------------------------------------------------------------------
# words in the generators Sq^1, Sq^2, Sq^4

GENERATORS = (1, 2, 4)


def _word_value(word: tuple) -> int:
    m = 1 << UNIT
    for letter in word:
        m = mul_masks(m, sq(letter))
    return m


def _build_words():
    """A basis of A(2) by words in Sq^1, Sq^2, Sq^4, found breadth-first, and
    each Milnor basis element expressed as a sum of those words."""
    basis_words: list[tuple] = []
    values: list[int] = []
    pivots: dict[int, tuple[int, int]] = {}   # pivot bit -> (reduced value, combo mask)

    def try_add(word, value):
        combo = 1 << len(basis_words)
        v = value
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, combo)
                basis_words.append(word)
                values.append(value)
                return True
            pv, pc = pivots[top]
            v ^= pv
            combo ^= pc
        return False

    try_add((), 1 << UNIT)
    frontier = [()]
    while frontier and len(basis_words) < 64:
        nxt = []
        for w in frontier:
            for g in GENERATORS:
                word = w + (g,)
                if try_add(word, _word_value(word)):
                    nxt.append(word)
        frontier = nxt
    if len(basis_words) != 64:
        raise RuntimeError("Sq^1, Sq^2, Sq^4 failed to generate A(2)")
    # express each Milnor basis element: reduce 1<<i against pivots
    expansions = []
    for i in range(64):
        v, combo = 1 << i, 0
        while v:
            top = v.bit_length() - 1
            pv, pc = pivots[top]
            v ^= pv
            combo ^= pc
        expansions.append(tuple(basis_words[k] for k in bits(combo)))
    return tuple(basis_words), tuple(expansions)


WORDS, EXPANSIONS = _build_words()


def expansion(r: MilnorElement) -> tuple[tuple[int, ...], ...]:
    """Sq(R) as a sum of words in Sq^1, Sq^2, Sq^4."""
    return EXPANSIONS[INDEX[tuple(r)]]


def adem(a: int, b: int) -> int:
    """Right-hand side of the Adem relation for Sq^a Sq^b (a < 2b) as a mask of
    products Sq^{a+b-c} Sq^c; only meaningful when all terms lie in A(2)."""
    from math import comb
    out = 0
    for c in range(a // 2 + 1):
        if comb(b - c - 1, a - 2 * c) % 2:
            out ^= mul_masks(sq(a + b - c) if a + b - c <= 7 else 0, sq(c))
    return out
