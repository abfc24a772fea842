"""Exact arithmetic in the generating-function rings.

Three rings are supported, all quotients of ``Z[s^+-1, t^+-1, x, y]``:

``R``        x^3 = 2 t^2 s x + t^3 s^2 y,  x y = t^3 s^3 y + t^5 s^6 y,  t^6 s^8 = 1
``RPRIME``   x^3 = 2 t^2 s x                      (no y, no periodicity)
``R_MOD_Y``  x^3 = 2 t^2 s x,  t^6 s^8 = 1         (y identically zero)

Every element is stored on the basis ``s^i t^j m`` with ``m`` in ``{1, x, x^2, y}``.
In the periodic rings the s-exponent is kept in the window ``[0, 8)``;
the t-exponent is never reduced.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import ParseError, RingMismatch, YInYFreeRing


class RingId(enum.Enum):
    R = "R"
    RPRIME = "RPRIME"
    R_MOD_Y = "R_MOD_Y"

    @property
    def periodic(self) -> bool:
        return self is not RingId.RPRIME

    @property
    def has_y(self) -> bool:
        return self is RingId.R

    @classmethod
    def parse(cls, name: str) -> "RingId":
        aliases = {"R": cls.R, "RP": cls.RPRIME, "RPRIME": cls.RPRIME, "R'": cls.RPRIME,
                   "R_MOD_Y": cls.R_MOD_Y, "RMODY": cls.R_MOD_Y}
        try:
            return aliases[name.upper()]
        except KeyError:
            raise ValueError(f"unknown ring {name!r}") from None


class Gen(enum.IntEnum):
    ONE = 0
    X = 1
    X2 = 2
    Y = 3


S_PERIOD = 8  # t^6 s^8 = 1
T_PERIOD = 6


@dataclass(frozen=True, order=True)
class Monomial:
    gen: Gen
    s_exp: int
    t_exp: int

    def window(self, ring: RingId) -> "Monomial":
        if not ring.periodic:
            return self
        k, s = divmod(self.s_exp, S_PERIOD)
        if k == 0:
            return self
        return Monomial(self.gen, s, self.t_exp - T_PERIOD * k)


def canonical_key(ring: RingId, gen: int, s: int, t: int) -> tuple[int, int, int]:
    if ring.periodic:
        k, s = divmod(s, S_PERIOD)
        t -= T_PERIOD * k
    return (gen, s, t)


# A "Laurent" is a dict (s, t) -> int; used for scalars of the y-part.
_C = {(3, 3): 1, (6, 5): 1}                      # x y = c y
_D = {(0, 0): 1, (-1, 0): 1, (2, 2): 1, (5, 4): 1}  # y y = d y


def _laurent_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for (s1, t1), c1 in a.items():
        for (s2, t2), c2 in b.items():
            key = (s1 + s2, t1 + t2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _laurent_pow(a: Mapping, n: int) -> dict:
    out = {(0, 0): 1}
    for _ in range(n):
        out = _laurent_mul(out, a)
    return out


def _basis_product(ring: RingId, g1: int, g2: int) -> list[tuple[int, int, int, int]]:
    """Product of two basis generators as a list of (coeff, ds, dt, gen)."""
    if g1 > g2:
        g1, g2 = g2, g1
    y = ring.has_y
    if g1 == Gen.ONE:
        return [(1, 0, 0, g2)]
    if g1 == Gen.X:
        if g2 == Gen.X:
            return [(1, 0, 0, Gen.X2)]
        if g2 == Gen.X2:
            out = [(2, 1, 2, Gen.X)]
            if y:
                out.append((1, 2, 3, Gen.Y))
            return out
        return [(c, s, t, Gen.Y) for (s, t), c in _C.items()]
    if g1 == Gen.X2:
        if g2 == Gen.X2:
            out = [(2, 1, 2, Gen.X2)]
            if y:
                out += [(c, s + 2, t + 3, Gen.Y) for (s, t), c in _C.items()]
            return out
        return [(c, s, t, Gen.Y) for (s, t), c in _laurent_pow(_C, 2).items()]
    return [(c, s, t, Gen.Y) for (s, t), c in _D.items()]


@lru_cache(maxsize=None)
def _product_table(ring: RingId) -> dict:
    gens = [int(g) for g in Gen]
    return {(a, b): [(c, s, t, int(g)) for c, s, t, g in _basis_product(ring, a, b)]
            for a in gens for b in gens}


class RingElement:
    """An immutable element of one of the three rings, in canonical form."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingId, terms: Mapping[tuple[int, int, int], int] | None = None,
                 _canonical: bool = False):
        self.ring = ring
        if _canonical:
            self._terms = dict(terms or {})
        else:
            acc: dict = {}
            for (g, s, t), c in (terms or {}).items():
                if g == Gen.Y and not ring.has_y:
                    raise YInYFreeRing(f"y-term supplied to ring {ring.value}")
                key = canonical_key(ring, int(g), s, t)
                acc[key] = acc.get(key, 0) + c
            self._terms = {k: v for k, v in acc.items() if v}
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, ring: RingId) -> "RingElement":
        return cls(ring, {}, _canonical=True)

    @classmethod
    def one(cls, ring: RingId) -> "RingElement":
        return cls(ring, {(Gen.ONE, 0, 0): 1}, _canonical=True)

    @classmethod
    def monomial(cls, ring: RingId, gen: Gen = Gen.ONE, s: int = 0, t: int = 0,
                 coeff: int = 1) -> "RingElement":
        return cls(ring, {(int(gen), s, t): coeff})

    @classmethod
    def x(cls, ring: RingId) -> "RingElement":
        return cls.monomial(ring, Gen.X)

    @classmethod
    def y(cls, ring: RingId) -> "RingElement":
        return cls.monomial(ring, Gen.Y)

    @classmethod
    def s(cls, ring: RingId, k: int = 1) -> "RingElement":
        return cls.monomial(ring, Gen.ONE, s=k)

    @classmethod
    def t(cls, ring: RingId, k: int = 1) -> "RingElement":
        return cls.monomial(ring, Gen.ONE, t=k)

    # data access
    @property
    def terms(self) -> dict[tuple[int, int, int], int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        for (g, s, t), c in sorted(self._terms.items()):
            yield Monomial(Gen(g), s, t), c

    def sorted_terms(self) -> list[tuple[int, int, int, int]]:
        """Stable serialization: (gen, s_exp, t_exp, coeff) sorted by gen, s, t."""
        return [(g, s, t, c) for (g, s, t), c in sorted(self._terms.items())]

    def coefficient(self, gen: Gen, s: int, t: int) -> int:
        return self._terms.get(canonical_key(self.ring, int(gen), s, t), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic
    def _check(self, other: "RingElement") -> None:
        if not isinstance(other, RingElement):
            raise TypeError(f"cannot combine RingElement with {type(other).__name__}")
        if other.ring is not self.ring:
            raise RingMismatch(f"{self.ring.value} vs {other.ring.value}")

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, int):
            return RingElement(self.ring, {(Gen.ONE, 0, 0): other})
        return other

    def __add__(self, other) -> "RingElement":
        other = self._coerce(other)
        self._check(other)
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, 0) + v
        return RingElement(self.ring, {k: v for k, v in acc.items() if v}, _canonical=True)

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, {k: -v for k, v in self._terms.items()}, _canonical=True)

    def __sub__(self, other) -> "RingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RingElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RingElement":
        if isinstance(other, int):
            if other == 0:
                return RingElement.zero(self.ring)
            return RingElement(self.ring, {k: v * other for k, v in self._terms.items()},
                               _canonical=True)
        self._check(other)
        ring = self.ring
        table = _product_table(ring)
        periodic = ring.periodic
        acc: dict = {}
        get = acc.get
        for (g1, s1, t1), c1 in self._terms.items():
            for (g2, s2, t2), c2 in other._terms.items():
                s0, t0, cc = s1 + s2, t1 + t2, c1 * c2
                for c, ds, dt, g in table[g1, g2]:
                    s, t = s0 + ds, t0 + dt
                    if periodic and not 0 <= s < S_PERIOD:
                        k, s = divmod(s, S_PERIOD)
                        t -= T_PERIOD * k
                    key = (g, s, t)
                    acc[key] = get(key, 0) + c * cc
        return RingElement(ring, {k: v for k, v in acc.items() if v}, _canonical=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElement":
        return pow_(self, k)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"RingElement({self.ring.value}, {format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)


# ---------------------------------------------------------------------------
# normalization of raw expressions

RawTerm = tuple[int, int, int, int, int]  # (s_exp, t_exp, x_exp, y_exp, coeff)


@lru_cache(maxsize=None)
def _x_power(ring: RingId, a: int) -> RingElement:
    if a == 0:
        return RingElement.one(ring)
    if a == 1:
        return RingElement.x(ring)
    return _x_power(ring, a - 1) * RingElement.x(ring)


def _closed_form(ring: RingId, s: int, t: int, a: int, b: int) -> RingElement:
    """x^a y^b via x^a -> repeated substitution and x^a y^b = c^a d^(b-1) y."""
    if b == 0:
        base = _x_power(ring, a)
        return RingElement(ring, {(g, s0 + s, t0 + t): c for (g, s0, t0), c in base._terms.items()})
    scal = _laurent_mul(_laurent_pow(_C, a), _laurent_pow(_D, b - 1))
    return RingElement(ring, {(Gen.Y, s + ds, t + dt): c for (ds, dt), c in scal.items()})


def _factor_list(a: int, b: int) -> list[RingElement]:
    return ["x"] * a + ["y"] * b


def normalize(raw: Iterable[RawTerm], ring: RingId, strategy: str = "closed") -> RingElement:
    """Reduce a raw expression to canonical form.

    ``strategy`` selects the rewriting order: ``"closed"`` uses closed forms
    for x-powers and the y-part, ``"left"``/``"right"`` multiply the factors
    of each monomial one generator at a time from the left or the right.
    All strategies agree (the rewriting system is confluent).
    """
    acc = RingElement.zero(ring)
    for s, t, a, b, coeff in raw:
        if a < 0 or b < 0:
            raise ValueError("x and y exponents must be nonnegative")
        if b and not ring.has_y:
            raise YInYFreeRing(f"y-term supplied to ring {ring.value}")
        if coeff == 0:
            continue
        if strategy == "closed":
            term = _closed_form(ring, s, t, a, b)
        else:
            gens = {"x": RingElement.x(ring), "y": RingElement.y(ring) if ring.has_y else None}
            factors = [gens[f] for f in _factor_list(a, b)]
            if strategy == "right":
                factors.reverse()
            term = RingElement.monomial(ring, Gen.ONE, s, t)
            for f in factors:
                if strategy == "left":
                    term = term * f
                else:
                    term = f * term
        acc = acc + term * coeff
    return acc


def pow_(a: RingElement, k: int) -> RingElement:
    if k < 0:
        raise ValueError("negative power")
    result = RingElement.one(a.ring)
    base = a
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


# ---------------------------------------------------------------------------
# maps between rings

# x -> t^-2 s^-1 x, hence x^2 -> t^-4 s^-2 x^2;  y -> s y
_DUAL_GEN_SHIFT = {Gen.ONE: (0, 0), Gen.X: (-1, -2), Gen.X2: (-2, -4), Gen.Y: (1, 0)}


def dualize(a: RingElement) -> RingElement:
    """The duality involution s -> s^-1, t -> t^-1, x -> t^-2 s^-1 x, y -> s y."""
    out = {}
    for (g, s, t), c in a._terms.items():
        ds, dt = _DUAL_GEN_SHIFT[Gen(g)]
        out[(g, -s + ds, -t + dt)] = c
    return RingElement(a.ring, out)


def project_mod_y(a: RingElement) -> RingElement:
    if a.ring is not RingId.R:
        raise RingMismatch(f"project_mod_y expects R, got {a.ring.value}")
    return RingElement(RingId.R_MOD_Y, {k: v for k, v in a._terms.items() if k[0] != Gen.Y})


def embed_gprime(a: RingElement) -> RingElement:
    """The ring map R' -> R/(y) fixing s, t and x."""
    if a.ring is not RingId.RPRIME:
        raise RingMismatch(f"embed_gprime expects RPRIME, got {a.ring.value}")
    return RingElement(RingId.R_MOD_Y, a._terms)


# ---------------------------------------------------------------------------
# text form

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sign>[+-])
  | (?P<num>\d+)
  | (?P<var>[stxy])(?:\s*\^\s*(?:\{\s*(?P<bexp>-?\d+)\s*\}|(?P<exp>-?\d+)))?
  | (?P<star>\*)
""", re.VERBOSE)


def parse_element(text: str) -> list[RawTerm]:
    """Parse e.g. ``"s^2 t^3 y + 2 s t^2 x"`` into raw terms.

    Juxtaposition is multiplication; ``^{k}`` (TeX braces) is accepted as
    well as ``^k``.
    """
    pos = 0
    n = len(text)
    terms: list[RawTerm] = []
    sign = 1
    current: list | None = None  # [s, t, a, b, coeff, have_factor]
    expect_term = True

    def finish():
        nonlocal current
        if current is not None:
            s, t, a, b, coeff, _ = current
            terms.append((s, t, a, b, coeff))
            current = None

    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        kind = m.lastgroup if m.lastgroup not in ("exp", "bexp") else "var"
        if m.group("ws"):
            pos = m.end()
            continue
        if m.group("sign") is not None:
            if current is not None:
                finish()
                sign = 1 if m.group("sign") == "+" else -1
                expect_term = True
            elif expect_term and not terms and sign == 1:
                sign = 1 if m.group("sign") == "+" else -1
            else:
                raise ParseError("dangling sign", position=pos)
            pos = m.end()
            continue
        if m.group("star") is not None:
            if current is None:
                raise ParseError("'*' without left operand", position=pos)
            pos = m.end()
            continue
        if current is None:
            if not expect_term:
                raise ParseError("missing '+' between terms", position=pos)
            current = [0, 0, 0, 0, sign, False]
            expect_term = False
        if m.group("num") is not None:
            if current[5]:
                raise ParseError("coefficient must precede factors", position=pos)
            current[4] *= int(m.group("num"))
            current[5] = True
        else:
            var = m.group("var")
            e = m.group("exp") or m.group("bexp")
            e = int(e) if e is not None else 1
            if var in "xy" and e < 0:
                raise ParseError(f"negative exponent on {var}", position=pos)
            idx = "stxy".index(var)
            current[idx] += e
            current[5] = True
        pos = m.end()
    if current is None:
        if terms or not text.strip():
            raise ParseError("expression ends without a term", position=n)
    finish()
    if not terms:
        raise ParseError("empty expression", position=0)
    return terms


def parse(text: str, ring: RingId = RingId.R) -> RingElement:
    return normalize(parse_element(text), ring)


def _fmt_var(v: str, e: int) -> str:
    if e == 0:
        return ""
    return v if e == 1 else f"{v}^{e}"


def _display_key(item):
    (g, s, t), _ = item
    order = {Gen.Y: 0, Gen.X2: 1, Gen.X: 2, Gen.ONE: 3}[Gen(g)]
    return (order, -t, -s)


def format_element(a: RingElement) -> str:
    """Render in the tables' style: y-terms, then x^2, x, 1; t and s descending."""
    if not a._terms:
        return "0"
    pieces = []
    for (g, s, t), c in sorted(a._terms.items(), key=_display_key):
        factors = [_fmt_var("s", s), _fmt_var("t", t),
                   {Gen.ONE: "", Gen.X: "x", Gen.X2: "x^2", Gen.Y: "y"}[Gen(g)]]
        body = " ".join(f for f in factors if f)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag} {body}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + text)
        else:
            pieces.append(("- " if c < 0 else "+ ") + text)
    return " ".join(pieces)
