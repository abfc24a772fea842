"""Standard A(2)-modules built as duals of weight-truncated comodules.

Homology is written in the conjugate generators zeta_k (degree 2^k - 1,
weight 2^(k-1)).  The coaction is the coproduct
``zeta_k -> sum_i zeta_i (x) zeta_{k-i}^(2^i)`` with the left factor pushed
to A(2)_* and rewritten in the Milnor monomials xi^R; the coefficient of
xi^R is the action of Sq(R) on the dual basis.
"""

from __future__ import annotations

import os
import re
from functools import lru_cache

from . import milnor as A
from .errors import BudgetExceeded
from .modules import SteenrodModule, dual

DEFAULT_BUDGET = int(os.environ.get("TMFRES_MODULE_BUDGET", "4096"))


def _xi_index(r) -> int | None:
    r = tuple(r)
    return A.INDEX[r] if A.in_profile(r) else None


@lru_cache(maxsize=None)
def _xi_mul_index(i: int, j: int) -> int | None:
    r = tuple(a + b for a, b in zip(A.BASIS[i], A.BASIS[j]))
    return _xi_index(r)


def xi_mul(a: int, b: int) -> int:
    """Product in A(2)_* of two masks over the xi-monomial basis."""
    out = 0
    for i in A.bits(a):
        for j in A.bits(b):
            k = _xi_mul_index(i, j)
            if k is not None:
                out ^= 1 << k
    return out


def _xi_power(m: int, e: int) -> int:
    """xi_m^e as a mask (zero if it leaves A(2)_*)."""
    if m > 3:
        return 0 if e else 1 << A.UNIT
    r = [0, 0, 0]
    r[m - 1] = e
    k = _xi_index(r)
    return 0 if k is None else 1 << k


@lru_cache(maxsize=None)
def zeta_in_xi(k: int) -> int:
    """zeta_k in A(2)_*, from sum_i xi_{k-i}^(2^i) zeta_i = 0."""
    if k == 0:
        return 1 << A.UNIT
    out = 0
    for i in range(k):
        out ^= xi_mul(_xi_power(k - i, 2 ** i), zeta_in_xi(i))
    return out


def zeta_degree(k: int) -> int:
    return 2 ** k - 1


def zeta_weight(k: int) -> int:
    return 2 ** (k - 1)


Exponents = tuple  # exponents of zeta_1, ..., zeta_K


def _right_ok(e: Exponents, truncate: bool) -> bool:
    if not truncate:
        return True
    return all(x == 0 for x in e[3:]) and all(x < p for x, p in zip(e, A.PROFILE))


def _coaction_generator(k: int, K: int) -> dict[Exponents, int]:
    out: dict = {}
    for i in range(k + 1):
        left = zeta_in_xi(i)
        if not left:
            continue
        e = [0] * K
        if k - i >= 1:
            e[k - i - 1] = 2 ** i
        key = tuple(e)
        out[key] = out.get(key, 0) ^ left
    return out


def _mul_coaction(p: dict, q: dict, truncate: bool) -> dict:
    out: dict = {}
    for e1, l1 in p.items():
        for e2, l2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if not _right_ok(e, truncate):
                continue
            left = xi_mul(l1, l2)
            if left:
                out[e] = out.get(e, 0) ^ left
    return {e: l for e, l in out.items() if l}


def coaction(e: Exponents, truncate: bool = False) -> dict[Exponents, int]:
    """psi(zeta^e) as {right exponent vector: left mask over xi-monomials}."""
    return _coaction_cached(tuple(e), truncate)


@lru_cache(maxsize=None)
def _coaction_cached(e: Exponents, truncate: bool) -> dict:
    K = len(e)
    if not any(e):
        return {e: 1 << A.UNIT}
    k = next(i for i, x in enumerate(e) if x)
    rest = list(e)
    rest[k] -= 1
    return _mul_coaction(_coaction_cached(tuple(rest), truncate),
                         _coaction_generator(k + 1, K), truncate)


def monomials(steps: dict[int, int], weight_max: int, K: int) -> list[Exponents]:
    """Exponent vectors with zeta_k^(step_k * m) and total weight <= weight_max."""
    out = []

    def rec(k, acc, w):
        if k > K:
            out.append(tuple(acc))
            return
        step = steps.get(k, 1)
        e = 0
        while w + e * zeta_weight(k) <= weight_max:
            rec(k + 1, acc + [e], w + e * zeta_weight(k))
            e += step
    rec(1, [], 0)
    return out


def _name(e: Exponents) -> str:
    parts = [f"z{k + 1}" + (f"^{x}" if x > 1 else "") for k, x in enumerate(e) if x]
    return " ".join(parts) or "1"


def comodule_to_module(basis: list[Exponents], truncate: bool = False) -> SteenrodModule:
    """Dual A(2)-module of the subcomodule spanned by ``basis``."""
    deg = {e: sum(x * zeta_degree(k + 1) for k, x in enumerate(e)) for e in basis}
    basis = sorted(basis, key=lambda e: (deg[e], e))
    pos = {e: i for i, e in enumerate(basis)}
    n = len(basis)
    ops = [[0] * n for _ in range(64)]
    for p, e in enumerate(basis):
        for right, left in coaction(e, truncate).items():
            if right not in pos:
                raise ValueError(f"basis not closed under the coaction: {_name(e)} -> {_name(right)}")
            q = pos[right]
            for r in A.bits(left):
                ops[r][q] |= 1 << p
    m = SteenrodModule.from_milnor_ops([deg[e] for e in basis], [tuple(o) for o in ops],
                                       [_name(e) for e in basis])
    m.comodule_ops = tuple(tuple(o) for o in ops)
    return m


def _check_budget(count: int, budget: int, what: str):
    if count > budget:
        raise BudgetExceeded(f"{what} has {count} basis elements (budget {budget})")


def _K(weight_max: int) -> int:
    K = 1
    while zeta_weight(K + 1) <= weight_max:
        K += 1
    return K


def bo_module(j: int, budget: int = DEFAULT_BUDGET) -> SteenrodModule:
    """H^* of bo_j: dual of the weight <= 4j part of F2[zeta1^4, zeta2^2, zeta3, ...]."""
    W = 4 * j
    K = max(_K(W), 1)
    basis = monomials({1: 4, 2: 2}, W, K)
    _check_budget(len(basis), budget, f"BO({j})")
    return comodule_to_module(basis)


def tmf_module(j: int, budget: int = DEFAULT_BUDGET) -> SteenrodModule:
    """H^* of tmf_j: dual of the weight <= 8j part of F2[zeta1^8, zeta2^4, zeta3^2, zeta4, ...]."""
    W = 8 * j
    K = max(_K(W), 1)
    basis = monomials({1: 8, 2: 4, 3: 2}, W, K)
    _check_budget(len(basis), budget, f"TMF({j})")
    return comodule_to_module(basis)


def a2moda1_module() -> SteenrodModule:
    """A(2)//A(1): dual of F2[zeta1^4, zeta2^2, zeta3]/(zeta1^8, zeta2^4, zeta3^2)."""
    basis = [(4 * a, 2 * b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    return comodule_to_module(basis, truncate=True)


def m1_module() -> SteenrodModule:
    """The integral Brown-Gitler module M_1: x0, x2, x3 with Sq^2 x0 = x2, Sq^1 x2 = x3."""
    return SteenrodModule.from_generators([0, 2, 3], (0, 1 << 2, 0), (1 << 1, 0, 0), (0, 0, 0),
                                          ["x0", "x2", "x3"])


_NAME = re.compile(r"^\s*(BO|TMF)\s*\(?\s*(\d+)\s*\)?\s*$", re.I)


def build_standard(name: str, budget: int = DEFAULT_BUDGET) -> SteenrodModule:
    key = name.strip().upper().replace("-", "_")
    m = _NAME.match(key)
    if m:
        j = int(m.group(2))
        return bo_module(j, budget) if m.group(1) == "BO" else tmf_module(j, budget)
    if key in ("A2MODA1", "A2//A1", "A2_MOD_A1"):
        return a2moda1_module()
    if key == "M1":
        return m1_module()
    if key in ("F2", "TRIVIAL"):
        return SteenrodModule([0])
    if key in ("DUAL_BO1", "DBO1"):
        return dual(bo_module(1, budget))
    raise ValueError(f"unknown standard module {name!r}")
