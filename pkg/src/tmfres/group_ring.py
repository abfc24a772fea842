"""Exact arithmetic in Z_(2)[Sigma_3] and the idempotent splitting of 1."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

Perm = tuple  # images of 1, 2, 3

IDENTITY: Perm = (1, 2, 3)
ELEMENTS: tuple[Perm, ...] = tuple(permutations((1, 2, 3)))


def compose(p: Perm, q: Perm) -> Perm:
    """p q: apply q first, then p."""
    return tuple(p[q[i] - 1] for i in range(3))


def inverse(p: Perm) -> Perm:
    out = [0, 0, 0]
    for i, x in enumerate(p):
        out[x - 1] = i + 1
    return tuple(out)


def cycle(text: str) -> Perm:
    """Parse cycle notation such as ``(1 2 3)`` or ``(1 3)``; ``()`` is the identity."""
    img = {1: 1, 2: 2, 3: 3}
    for group in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) for x in group.replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return (img[1], img[2], img[3])


class GroupRingElement:
    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {p: Fraction(c) for p, c in (coeffs or {}).items() if c}
        for c in self.coeffs.values():
            if c.denominator % 2 == 0:
                raise ValueError(f"coefficient {c} is not 2-local")

    @classmethod
    def of(cls, *terms: tuple[int | Fraction, str], scale=1) -> "GroupRingElement":
        out: dict = {}
        for c, text in terms:
            p = cycle(text)
            out[p] = out.get(p, 0) + Fraction(c) * Fraction(scale)
        return cls(out)

    def __add__(self, other):
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0) + c
        return GroupRingElement(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GroupRingElement({p: c * other for p, c in self.coeffs.items()})
        out: dict = {}
        for p, a in self.coeffs.items():
            for q, b in other.coeffs.items():
                r = compose(p, q)
                out[r] = out.get(r, 0) + a * b
        return GroupRingElement(out)

    def conjugate(self, g: Perm) -> "GroupRingElement":
        gi = inverse(g)
        return GroupRingElement({compose(compose(g, p), gi): c for p, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{p}" for p, c in sorted(self.coeffs.items()))


ONE = GroupRingElement({IDENTITY: 1})
F1 = GroupRingElement.of((1, "()"), (1, "(1 2)"), (-1, "(1 3)"), (-1, "(1 2 3)"), scale=Fraction(1, 3))
F2 = GroupRingElement.of((1, "()"), (1, "(1 3)"), (-1, "(1 2)"), (-1, "(1 3 2)"), scale=Fraction(1, 3))
E = GroupRingElement.of((1, "()"), (1, "(1 2 3)"), (1, "(1 3 2)"), scale=Fraction(1, 3))


@dataclass
class IdempotentReport:
    checks: dict[str, bool]
    conjugator: Perm | None      # g with g f1 g^-1 = f2

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify_sigma3_idempotents() -> IdempotentReport:
    named = {"f1": F1, "f2": F2, "e": E}
    checks = {}
    for n, x in named.items():
        checks[f"{n}^2 = {n}"] = x * x == x
    checks["f1 + f2 + e = 1"] = F1 + F2 + E == ONE
    ortho = all((x * y).is_zero() for a, x in named.items() for b, y in named.items() if a != b)
    checks["pairwise products vanish"] = ortho
    conj = next((g for g in ELEMENTS if F1.conjugate(g) == F2), None)
    return IdempotentReport(checks, conj)
