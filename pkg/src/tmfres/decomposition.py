"""Summand reports for v2-local and g-local objects, generating series, and
the g-local Poincare-series census.

A monomial ``c s^i t^l m`` corresponds to ``c`` copies of ``Sigma^{8l,i}`` of
F2 (m = 1), bo_1 (m = x), bo_1^{(x)2} (m = x^2) or TMF_0(3) (m = y).
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .brown_gitler import bg_poly, bg_poly_gloc
from .errors import NegativeMultiplicity, ParseError, UnsupportedKind, WindowTooLarge
from .ring import Gen, Monomial, RingElement, RingId, dualize, pow_


class Locality(enum.Enum):
    V2 = "v2"
    G = "g"

    @property
    def ring(self) -> RingId:
        return RingId.R if self is Locality.V2 else RingId.RPRIME

    @classmethod
    def parse(cls, text) -> "Locality":
        if isinstance(text, Locality):
            return text
        return cls(text.lower())


class SummandKind(enum.IntEnum):
    F2 = 0
    BO1 = 1
    BO1SQ = 2
    TMF03 = 3

    @property
    def label(self) -> str:
        return {0: "F2", 1: "bo1", 2: "bo1^2", 3: "TMF0(3)"}[self.value]


_GEN_TO_KIND = {Gen.ONE: SummandKind.F2, Gen.X: SummandKind.BO1,
                Gen.X2: SummandKind.BO1SQ, Gen.Y: SummandKind.TMF03}
_KIND_TO_GEN = {v: k for k, v in _GEN_TO_KIND.items()}


@dataclass(frozen=True, order=True)
class Summand:
    kind: SummandKind
    internal_shift: int
    filtration_shift: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.internal_shift % 8:
            raise ValueError("internal shift must be a multiple of 8")
        if self.multiplicity <= 0:
            raise NegativeMultiplicity(f"multiplicity {self.multiplicity}")

    def __str__(self):
        mult = f"{self.multiplicity}*" if self.multiplicity != 1 else ""
        return f"{mult}S^{{{self.internal_shift},{self.filtration_shift}}}{self.kind.label}"

    def to_json(self) -> dict:
        return {"kind": self.kind.name, "shift": [self.internal_shift, self.filtration_shift],
                "mult": self.multiplicity}


def monomial_to_summand(m: Monomial, coeff: int) -> Summand:
    if coeff <= 0:
        raise NegativeMultiplicity(f"coefficient {coeff} on {m} (upstream cancellation?)")
    return Summand(_GEN_TO_KIND[m.gen], 8 * m.t_exp, m.s_exp, coeff)


@dataclass(frozen=True)
class DecompositionReport:
    locality: Locality
    source: str
    summands: tuple[Summand, ...]

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))
        if self.locality is Locality.G and any(x.kind is SummandKind.TMF03 for x in self.summands):
            raise UnsupportedKind("TMF0(3) summand in a g-local report")

    def __str__(self):
        if not self.summands:
            return "0"
        return " + ".join(str(x) for x in self.summands)

    def total(self, kind: SummandKind | None = None) -> int:
        return sum(x.multiplicity for x in self.summands if kind is None or x.kind is kind)

    def shifted(self, internal: int = 0, filtration: int = 0, source: str | None = None
                ) -> "DecompositionReport":
        el = report_to_element(self) * RingElement.monomial(self.locality.ring, Gen.ONE,
                                                            s=filtration, t=internal // 8)
        return report_from_element(el, self.locality, source or self.source)

    def to_json(self) -> dict:
        return {"locality": self.locality.value, "source": self.source,
                "summands": [x.to_json() for x in self.summands]}

    @classmethod
    def from_json(cls, data: Mapping) -> "DecompositionReport":
        return cls(Locality.parse(data["locality"]), data["source"],
                   tuple(Summand(SummandKind[d["kind"]], d["shift"][0], d["shift"][1], d["mult"])
                         for d in data["summands"]))


def report_from_element(el: RingElement, locality: Locality | str, source: str
                        ) -> DecompositionReport:
    locality = Locality.parse(locality)
    if el.ring is not locality.ring:
        raise ValueError(f"{locality.value}-local reports are read off ring {locality.ring.value}")
    return DecompositionReport(locality, source, tuple(monomial_to_summand(m, c) for m, c in el.items()))


def report_to_element(r: DecompositionReport) -> RingElement:
    ring = r.locality.ring
    return RingElement(ring, {(int(_KIND_TO_GEN[x.kind]), x.filtration_shift, x.internal_shift // 8):
                              x.multiplicity for x in r.summands})


_LABELS = {"F2": SummandKind.F2, "BO1": SummandKind.BO1, "BO1^2": SummandKind.BO1SQ,
           "BO1SQ": SummandKind.BO1SQ, "TMF0(3)": SummandKind.TMF03, "TMF03": SummandKind.TMF03}
_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?S\^\{?\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*)?\}?\s*(\S+)$")


def parse_report(text: str, locality: Locality | str = Locality.V2, source: str = "input"
                 ) -> DecompositionReport:
    """Parse ``2*S^{16,1}bo1 + S^{24,2}TMF0(3)`` (the printed form of a report).

    Shifts are brought into the canonical window, so equal objects parse equal.
    """
    locality = Locality.parse(locality)
    ring = locality.ring
    el = RingElement.zero(ring)
    text = text.strip()
    if text in ("", "0"):
        return DecompositionReport(locality, source, ())
    for part in text.split("+"):
        m = _TERM.match(part.strip())
        if not m:
            raise ParseError(f"cannot read summand {part.strip()!r}")
        mult = int(m.group(1) or 1)
        n, f = int(m.group(2)), int(m.group(3) or 0)
        kind = _LABELS.get(m.group(4).upper())
        if kind is None:
            raise ParseError(f"unknown summand kind {m.group(4)!r}")
        if kind is SummandKind.TMF03 and locality is Locality.G:
            raise UnsupportedKind("TMF0(3) summand in a g-local report")
        if n % 8:
            raise ParseError(f"internal shift {n} is not a multiple of 8")
        el = el + RingElement.monomial(ring, _KIND_TO_GEN[kind], s=f, t=n // 8, coeff=mult)
    return report_from_element(el, locality, source)


def decompose_bo(j: int, locality: Locality | str = Locality.V2) -> DecompositionReport:
    if j < 0:
        raise ValueError("j must be nonnegative")
    locality = Locality.parse(locality)
    f = bg_poly(j) if locality is Locality.V2 else bg_poly_gloc(j)
    return report_from_element(f.value, locality, f"bo_{j}")


def decompose_power(k: int, locality: Locality | str = Locality.V2) -> DecompositionReport:
    if k < 0:
        raise ValueError("k must be nonnegative")
    locality = Locality.parse(locality)
    el = pow_(RingElement.x(locality.ring), k)
    return report_from_element(el, locality, f"bo_1^{k}")


def dualize_report(r: DecompositionReport) -> DecompositionReport:
    return report_from_element(dualize(report_to_element(r)), r.locality, f"D({r.source})")


# ---------------------------------------------------------------------------
# generating series in w


@dataclass
class TruncatedSeries:
    ring: RingId
    bound: int
    coefficients: dict[int, RingElement] = field(default_factory=dict)

    def coefficient(self, j: int) -> RingElement:
        return self.coefficients.get(j, RingElement.zero(self.ring))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        bound = min(self.bound, other.bound)
        out: dict[int, RingElement] = {}
        for i, a in self.coefficients.items():
            for j, b in other.coefficients.items():
                if i + j <= bound:
                    out[i + j] = out.get(i + j, RingElement.zero(self.ring)) + a * b
        return TruncatedSeries(self.ring, bound, {k: v for k, v in out.items() if v})

    def power(self, n: int) -> "TruncatedSeries":
        result = TruncatedSeries(self.ring, self.bound, {0: RingElement.one(self.ring)})
        for _ in range(n):
            result = result * self
        return result


def bg_series(j_max: int, locality: Locality | str = Locality.V2, *, include_unit: bool = False
              ) -> TruncatedSeries:
    """h = sum_{j>=1} t^j f_j w^j truncated at w^j_max (plus 1 if ``include_unit``)."""
    locality = Locality.parse(locality)
    ring = locality.ring
    poly = bg_poly if locality is Locality.V2 else bg_poly_gloc
    coeffs = {j: RingElement.t(ring, j) * poly(j).value for j in range(1, j_max + 1)}
    if include_unit:
        coeffs[0] = RingElement.one(ring)
    return TruncatedSeries(ring, j_max, coeffs)


def tmfbar_series(n: int, j_max: int, locality: Locality | str = Locality.V2
                  ) -> dict[int, DecompositionReport]:
    """Weight-8j summands of the n-fold tensor power of tmf-bar, for 1 <= j <= j_max."""
    if n < 1 or j_max < n:
        raise ValueError("need n >= 1 and j_max >= n")
    locality = Locality.parse(locality)
    hn = bg_series(j_max, locality).power(n)
    return {j: report_from_element(hn.coefficient(j), locality, f"tmfbar^{n} weight {8 * j}")
            for j in range(1, j_max + 1)}


def compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def brute_force_weight(n: int, j: int, locality: Locality | str = Locality.V2) -> RingElement:
    """Sum over compositions i_1 + ... + i_n = j of t^j f_{i_1} ... f_{i_n}."""
    if n < 1 or j < n:
        raise ValueError("need n >= 1 and j >= n")
    locality = Locality.parse(locality)
    ring = locality.ring
    poly = bg_poly if locality is Locality.V2 else bg_poly_gloc
    total = RingElement.zero(ring)
    for comp in compositions(j, n):
        term = RingElement.t(ring, j)
        for i in comp:
            term = term * poly(i).value
        total = total + term
    return total


# ---------------------------------------------------------------------------
# g-local homotopy series
#
# Everything here is free over F2[h21^{+-1}, v2^8] (h21 in (5,1), v2^8 in
# (48,8)); the series record the F2[h21^{+-1}, v1]-module obtained by setting
# v2^8 = 0, which is finite in every bidegree.  v1 sits in (2,1).

H21 = (5, 1)
V1 = (2, 1)
V2_8 = (48, 8)

# kind -> (generator (stem, filtration), v1-torsion exponent; None = v1-free)
# bo_1: t_{1,1}, stem 12 in Sigma^8 bo_1, i.e. stem 4 in bo_1's own frame.
# bo_1^2: Q_1(x_{1,1} x_{1,2}) at stem 27 in Sigma^16, i.e. 11; h21 moves it to (16,1).
GLOCAL_GENERATORS = {
    SummandKind.F2: ((0, 0), None),
    SummandKind.BO1: ((4, 0), 1),
    SummandKind.BO1SQ: ((16, 1), 2),
}


@dataclass(frozen=True)
class Window:
    n_min: int
    n_max: int
    s_min: int
    s_max: int

    def contains(self, n: int, s: int) -> bool:
        return self.n_min <= n <= self.n_max and self.s_min <= s <= self.s_max


@dataclass
class BigradedSeries:
    window: Window
    dims: Counter = field(default_factory=Counter)   # (n, s, weight) -> dim

    def add(self, other: "BigradedSeries") -> "BigradedSeries":
        out = Counter(self.dims)
        out.update(other.dims)
        return BigradedSeries(self.window, +out)

    def total(self) -> Counter:
        """Dimensions with weight summed out."""
        out: Counter = Counter()
        for (n, s, _), d in self.dims.items():
            out[(n, s)] += d
        return +out

    def by_weight(self, weight: int) -> Counter:
        return +Counter({(n, s): d for (n, s, w), d in self.dims.items() if w == weight})

    def weights(self) -> set[int]:
        return {w for (_, _, w) in self.dims}

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedSeries) and +self.dims == +other.dims

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "s", "weight", "dim"])
        for (n, s, w), d in sorted(self.dims.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])):
            if d:
                writer.writerow([n, s, w, d])
        return buf.getvalue()


@dataclass(frozen=True, order=True)
class GLocalGenerator:
    """A cyclic F2[h21^{+-1}, v1]-module summand, normalized by h21 to filtration 0."""
    stem: int
    weight: int
    torsion: int        # v1-torsion exponent; 0 encodes v1-free


def _normalize(n: int, s: int) -> int:
    return n - 5 * s


def _expand(gen_n: int, gen_s: int, exponent: int | None, weight: int, count: int,
            window: Window, out: Counter) -> None:
    lo_m = window.n_min - 5 * window.s_max
    m0 = _normalize(gen_n, gen_s)
    b = 0
    while exponent is None or b < exponent:
        m = m0 - 3 * b
        if m < lo_m:
            break
        base_n, base_s = gen_n + 2 * b, gen_s + b
        # h21^a: (base_n + 5a, base_s + a)
        for s in range(window.s_min, window.s_max + 1):
            a = s - base_s
            n = base_n + 5 * a
            if window.n_min <= n <= window.n_max:
                out[(n, s, weight)] += count
        b += 1


def glocal_generators(r: DecompositionReport, weight: int = 0) -> Counter:
    if r.locality is not Locality.G:
        raise UnsupportedKind("g-local series need a g-local report")
    out: Counter = Counter()
    for x in r.summands:
        if x.kind not in GLOCAL_GENERATORS:
            raise UnsupportedKind(f"{x.kind.name} has no g-local homotopy")
        (n0, s0), e = GLOCAL_GENERATORS[x.kind]
        n, s = n0 + x.internal_shift, s0 + x.filtration_shift
        out[GLocalGenerator(_normalize(n, s), weight, e or 0)] += x.multiplicity
    return out


def series_from_generators(gens: Mapping[GLocalGenerator, int], window: Window) -> BigradedSeries:
    out: Counter = Counter()
    for g, count in gens.items():
        _expand(g.stem, 0, g.torsion or None, g.weight, count, window, out)
    return BigradedSeries(window, +out)


def homotopy_series_glocal(r: DecompositionReport, window: Window, weight: int = 0
                           ) -> BigradedSeries:
    """Bigraded dimensions (mod v2^8) of the g-local homotopy of a report's summands."""
    return series_from_generators(glocal_generators(r, weight), window)


# ---------------------------------------------------------------------------
# census of the g-local homotopy of tmf^{(x)n} from index-set combinatorics

DEFAULT_CENSUS_BUDGET = 2_000_000


def x_degree(i: int) -> int:
    return 2 ** (i + 3) - 1


def t_degree(i: int) -> int:
    return 4 * (2 ** (i + 1) - 1)


def index_weight(i: int) -> int:
    return 2 ** (i + 2)


def t_set_size(k: int) -> int:
    """|T_J| for |J| = k >= 1: one appended index keeps the size, two double it."""
    if k < 1:
        raise ValueError("T_J needs a nonempty J")
    return 2 ** ((k - 1) // 2)


def t_set_q1_count(k: int) -> int:
    """Number of Q_1 applications inside each element of T_J, |J| = k."""
    return (k - 1) // 2


def census_generators(n: int, weight_max: int, q1_shift: int = -3,
                      budget: int = DEFAULT_CENSUS_BUDGET) -> Counter:
    """Generators of the F2[h21^{+-1}, v1]-module (modulo v2^8) for tmf^{(x)n},
    graded by stem and weight.

    Free towers come from x_{J'} t_{J'}; N_J{x_{J'}t_{J'}} gives |T_J| classes
    that are v1-torsion of exponent 1 (|J| odd) or 2 (|J| even, nonzero).
    ``q1_shift`` is the internal-degree change caused by Q_1 on homology.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    i_max = 0
    while index_weight(i_max + 1) <= weight_max:
        i_max += 1
    indices = [(i, j) for j in range(1, n + 1) for i in range(1, i_max + 1)]
    out: Counter = Counter()
    visited = 0

    def rec(pos: int, w: int, j_odd: list, j_prime: list):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise WindowTooLarge(f"census enumeration exceeded {budget} index sets")
        if pos == len(indices):
            k = len(j_odd)
            deg = sum(x_degree(i) + t_degree(i) for i, _ in j_prime)
            if k == 0:
                out[GLocalGenerator(deg, w, 0)] += 1
            else:
                deg += sum(x_degree(i) for i, _ in j_odd) + q1_shift * (t_set_q1_count(k) + 1)
                out[GLocalGenerator(deg, w, 1 if k % 2 else 2)] += t_set_size(k)
            return
        i, _ = indices[pos]
        wt = index_weight(i)
        rec(pos + 1, w, j_odd, j_prime)
        if w + wt <= weight_max:
            rec(pos + 1, w + wt, j_odd + [indices[pos]], j_prime)
        if w + 2 * wt <= weight_max:
            rec(pos + 1, w + 2 * wt, j_odd, j_prime + [indices[pos]])

    rec(0, 0, [], [])
    return out


def census_bbt(n: int, window: Window, weight_max: int, q1_shift: int = -3,
               budget: int = DEFAULT_CENSUS_BUDGET) -> BigradedSeries:
    return series_from_generators(census_generators(n, weight_max, q1_shift, budget), window)


def decomposition_generators(n: int, weight_max: int) -> Counter:
    """The same generator census, read off the g-local Brown-Gitler polynomials:
    tmf^{(x)n} = (sum_j Sigma^{8j} bo_j)^{(x)n}, coefficient of w^j in H^n with
    H = 1 + sum_j t^j f'_j w^j."""
    j_max = weight_max // 8
    hn = bg_series(j_max, Locality.G, include_unit=True).power(n)
    out: Counter = Counter()
    for j in range(0, j_max + 1):
        rep = report_from_element(hn.coefficient(j), Locality.G, f"tmf^{n} weight {8 * j}")
        out.update(glocal_generators(rep, 8 * j))
    return out


def decomposition_series(n: int, window: Window, weight_max: int) -> BigradedSeries:
    return series_from_generators(decomposition_generators(n, weight_max), window)


def calibrate_q1_shift(weight_max: int = 64, candidates: Iterable[int] = (-3, 3)
                       ) -> dict[int, bool]:
    """Which Q_1 degree conventions make the n = 1 census match the decompositions."""
    target = decomposition_generators(1, weight_max)
    return {q: census_generators(1, weight_max, q) == target for q in candidates}


def printed_decompositions() -> dict[int, DecompositionReport]:
    """The displayed v2-local splittings of bo_1^k (k = 3..6), canonicalized."""
    from importlib import resources
    text = resources.files("tmfres.data.tables").joinpath("decompositions.txt").read_text()
    out = {}
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            k, rhs = line.split(":", 1)
            out[int(k)] = parse_report(rhs, Locality.V2, f"bo_1^{int(k)}")
    return out


def report_json(r: DecompositionReport) -> str:
    return json.dumps(r.to_json(), sort_keys=True)
