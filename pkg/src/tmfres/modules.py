"""Finite A(2)-modules: Bruner-format files, validation, constructions,
Margolis homology, Hom spaces, short exact sequences and isomorphisms."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _iproduct
from math import comb
from typing import Iterable, Sequence

from . import gf2
from . import milnor as A
from .errors import DegreeMismatch, NotExterior, ParseError

Operator = tuple  # images of the basis vectors, as bitmasks

MAX_SQ = 7   # Sq^i lies in A(2) for i <= 7


def apply(op: Operator, v: int) -> int:
    out = 0
    for g in A.bits(v):
        out ^= op[g]
    return out


def compose(a: Operator, b: Operator) -> Operator:
    """a o b (apply b first)."""
    return tuple(apply(a, x) for x in b)


def add_ops(a: Operator, b: Operator) -> Operator:
    return tuple(x ^ y for x, y in zip(a, b))


def transpose(op: Operator, n: int) -> Operator:
    out = [0] * n
    for i, img in enumerate(op):
        for j in A.bits(img):
            out[j] |= 1 << i
    return tuple(out)


def _zero(n: int) -> Operator:
    return (0,) * n


class SteenrodModule:
    """A finite graded A(2)-module given by its Sq^i action on a basis.

    ``action`` maps (i, g) to the set of basis indices in Sq^i(g), for
    1 <= i <= 7; missing keys mean zero.  The full A(2)-action is generated
    from Sq^1, Sq^2 and Sq^4.
    """

    def __init__(self, degrees: Sequence[int], action: dict | None = None,
                 names: Sequence[str] | None = None):
        self.degrees = tuple(int(d) for d in degrees)
        self.action = {k: frozenset(v) for k, v in (action or {}).items() if v}
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(len(self.degrees)))

    # --- basic data
    @property
    def dim(self) -> int:
        return len(self.degrees)

    def graded_dims(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees).items()))

    def basis_in_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    def sq(self, i: int) -> Operator:
        """The given Sq^i (from the action table)."""
        return tuple(sum(1 << t for t in self.action.get((i, g), ())) for g in range(self.dim))

    def __repr__(self):
        return f"SteenrodModule(dim={self.dim}, degrees={list(self.degrees)})"

    # --- derived A(2)-action
    @cached_property
    def word_ops(self) -> dict[tuple, Operator]:
        gens = {k: self.sq(k) for k in A.GENERATORS}
        ops = {(): tuple(1 << i for i in range(self.dim))}
        for w in A.WORDS:
            if w:
                ops[w] = compose(ops[w[:-1]], gens[w[-1]])
        return ops

    @cached_property
    def milnor_ops(self) -> tuple[Operator, ...]:
        """rho(Sq(R)) for the 64 Milnor basis elements, from words in Sq^1, Sq^2, Sq^4."""
        wops = self.word_ops
        out = []
        for exp in A.EXPANSIONS:
            op = _zero(self.dim)
            for w in exp:
                op = add_ops(op, wops[w])
            out.append(op)
        return tuple(out)

    def op(self, element: int) -> Operator:
        """rho of an A(2) element given as a Milnor mask."""
        out = _zero(self.dim)
        for i in A.bits(element):
            out = add_ops(out, self.milnor_ops[i])
        return out

    def act(self, element: int, v: int) -> int:
        return apply(self.op(element), v)

    # --- constructors
    @classmethod
    def from_generators(cls, degrees, sq1: Operator, sq2: Operator, sq4: Operator, names=None
                        ) -> "SteenrodModule":
        """Module from Sq^1, Sq^2, Sq^4; the remaining Sq^i are filled in."""
        m = cls(degrees, _ops_to_action({1: sq1, 2: sq2, 4: sq4}), names)
        return m.with_derived_action()

    @classmethod
    def from_milnor_ops(cls, degrees, ops: Sequence[Operator], names=None) -> "SteenrodModule":
        action = _ops_to_action({i: ops[A.INDEX[(i, 0, 0)]] for i in range(1, MAX_SQ + 1)})
        return cls(degrees, action, names)

    def with_derived_action(self) -> "SteenrodModule":
        """Same Sq^1, Sq^2, Sq^4; every Sq^i (i <= 7) recomputed from them."""
        ops = self.milnor_ops
        return SteenrodModule.from_milnor_ops(self.degrees, ops, self.names)

    def permuted(self, perm: Sequence[int]) -> "SteenrodModule":
        """Relabel: new basis element k is old element perm[k]."""
        inv = {old: new for new, old in enumerate(perm)}
        action = {(i, inv[g]): frozenset(inv[t] for t in ts) for (i, g), ts in self.action.items()}
        return SteenrodModule([self.degrees[p] for p in perm], action, [self.names[p] for p in perm])

    def sorted_by_degree(self) -> "SteenrodModule":
        perm = sorted(range(self.dim), key=lambda i: (self.degrees[i], i))
        return self.permuted(perm)


def _ops_to_action(ops: dict[int, Operator]) -> dict:
    action = {}
    for i, op in ops.items():
        for g, img in enumerate(op):
            if img:
                action[(i, g)] = frozenset(A.bits(img))
    return action


def zero_module() -> SteenrodModule:
    return SteenrodModule([], {})


def free_module(shifts: Iterable[int] = (0,)) -> SteenrodModule:
    """Free A(2)-module on generators in the given degrees (left multiplication)."""
    shifts = list(shifts)
    degrees, names = [], []
    for k, d in enumerate(shifts):
        for i, r in enumerate(A.BASIS):
            degrees.append(d + A.DEGREES[i])
            names.append(f"{A.format_mask(1 << i)}*e{k}")
    ops = []
    for j in range(64):
        cols = []
        for k in range(len(shifts)):
            for i in range(64):
                img = A.MULT[j][i]
                cols.append(sum(1 << (64 * k + b) for b in A.bits(img)))
        ops.append(tuple(cols))
    return SteenrodModule.from_milnor_ops(degrees, ops, names)


# ---------------------------------------------------------------------------
# Bruner module-definition files


def parse_bruner(text: str) -> SteenrodModule:
    """Parse: count line, degrees line, then lines ``g i k t1 ... tk``."""
    lines = [(n, ln.split()) for n, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise ParseError("empty module file", line=1)
    (n0, head), rest = lines[0], lines[1:]
    if len(head) != 1 or not head[0].lstrip("-").isdigit():
        raise ParseError("first line must be the generator count", line=n0)
    count = int(head[0])
    if count < 0:
        raise ParseError("negative generator count", line=n0)
    if count == 0:
        degrees, body = [], rest
    else:
        if not rest:
            raise ParseError("missing degrees line", line=n0 + 1)
        n1, degs = rest[0]
        body = rest[1:]
        try:
            degrees = [int(x) for x in degs]
        except ValueError:
            raise ParseError("degrees must be integers", line=n1) from None
        if len(degrees) != count:
            raise ParseError(f"expected {count} degrees, found {len(degrees)}", line=n1)
    action: dict = {}
    for n, toks in body:
        try:
            nums = [int(x) for x in toks]
        except ValueError:
            raise ParseError("action lines hold integers only", line=n) from None
        if len(nums) < 3:
            raise ParseError("action line needs 'g i k'", line=n)
        g, i, k, targets = nums[0], nums[1], nums[2], nums[3:]
        if k != len(targets):
            raise ParseError(f"declared {k} targets, found {len(targets)}", line=n)
        if not 0 <= g < count or any(not 0 <= t < count for t in targets):
            raise ParseError("generator index out of range", line=n)
        if i <= 0:
            raise ParseError("operation index must be positive", line=n)
        if (i, g) in action:
            raise ParseError(f"duplicate action line for Sq^{i} on {g}", line=n)
        for t in targets:
            if degrees[t] != degrees[g] + i:
                raise DegreeMismatch(f"Sq^{i}(g{g}) in degree {degrees[g] + i}, target g{t} "
                                     f"has degree {degrees[t]} (line {n})", line=n)
        odd = Counter(targets)
        action[(i, g)] = frozenset(t for t, c in odd.items() if c % 2)
    return SteenrodModule(degrees, action)


def emit_bruner(m: SteenrodModule) -> str:
    out = [str(m.dim), "", " ".join(map(str, m.degrees)), ""]
    for g in range(m.dim):
        block = []
        for i in sorted({i for (i, h) in m.action if h == g}):
            ts = sorted(m.action[(i, g)])
            if ts:
                block.append(" ".join(map(str, [g, i, len(ts)] + ts)))
        if block:
            out.extend(block)
            out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    degree_errors: list[str] = field(default_factory=list)
    adem_violations: list[str] = field(default_factory=list)
    derived_mismatches: list[str] = field(default_factory=list)
    relation_failures: list[str] = field(default_factory=list)
    outside_a2: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.degree_errors or self.adem_violations or self.derived_mismatches
                    or self.relation_failures or self.outside_a2)

    def lines(self) -> list[str]:
        out = []
        for label, items in (("degree", self.degree_errors), ("adem", self.adem_violations),
                             ("derived", self.derived_mismatches),
                             ("relation", self.relation_failures), ("outside", self.outside_a2)):
            out.extend(f"{label}: {x}" for x in items)
        return out


def adem_instances() -> list[tuple[int, int, list[tuple[int, int]]]]:
    """Adem relations Sq^a Sq^b = sum Sq^{a+b-c} Sq^c (0 < a < 2b) all of whose
    terms lie in A(2)."""
    out = []
    for a in range(1, MAX_SQ + 1):
        for b in range(1, MAX_SQ + 1):
            if a >= 2 * b:
                continue
            terms = [(a + b - c, c) for c in range(a // 2 + 1) if comb(b - c - 1, a - 2 * c) % 2]
            if all(x <= MAX_SQ for x, _ in terms):
                out.append((a, b, terms))
    return out


def validate_module(m: SteenrodModule) -> ValidationReport:
    rep = ValidationReport()
    n = m.dim
    for (i, g), ts in sorted(m.action.items()):
        if not 0 <= g < n:
            rep.degree_errors.append(f"Sq^{i} on unknown generator {g}")
            continue
        if i > MAX_SQ:
            rep.outside_a2.append(f"Sq^{i}(g{g}) given; Sq^{i} is not in A(2)")
        for t in sorted(ts):
            if not 0 <= t < n or m.degrees[t] != m.degrees[g] + i:
                rep.degree_errors.append(f"Sq^{i}(g{g}) -> g{t}: degree {m.degrees[g]}+{i} "
                                         f"!= {m.degrees[t] if 0 <= t < n else '?'}")
    if rep.degree_errors:
        return rep
    given = {i: m.sq(i) for i in range(MAX_SQ + 1)}
    given[0] = tuple(1 << g for g in range(n))
    for a, b, terms in adem_instances():
        lhs = compose(given[a], given[b])
        rhs = _zero(n)
        for x, c in terms:
            rhs = add_ops(rhs, compose(given[x], given[c]))
        for g in range(n):
            if lhs[g] != rhs[g]:
                rhs_txt = " + ".join(f"Sq^{x}Sq^{c}" if c else f"Sq^{x}" for x, c in terms) or "0"
                rep.adem_violations.append(f"Sq^{a}Sq^{b} = {rhs_txt} fails on g{g}")
    ops = m.milnor_ops
    for i in range(1, MAX_SQ + 1):
        if i in A.GENERATORS:
            continue
        derived = ops[A.INDEX[(i, 0, 0)]]
        for g in range(n):
            if derived[g] != given[i][g]:
                rep.derived_mismatches.append(
                    f"Sq^{i}(g{g}): given {sorted(A.bits(given[i][g]))}, "
                    f"from Sq^1/Sq^2/Sq^4 {sorted(A.bits(derived[g]))}")
    # rho(Sq^k b) = rho(Sq^k) rho(b) for the generators and every basis element b
    for k in A.GENERATORS:
        gk = ops[A.INDEX[(k, 0, 0)]]
        for j in range(64):
            lhs = m.op(A.MULT[A.INDEX[(k, 0, 0)]][j])
            rhs = compose(gk, ops[j])
            if lhs != rhs:
                rep.relation_failures.append(
                    f"Sq^{k} * {A.format_mask(1 << j)} acts inconsistently")
    return rep


# ---------------------------------------------------------------------------
# constructions


def suspend(m: SteenrodModule, k: int) -> SteenrodModule:
    return SteenrodModule([d + k for d in m.degrees], m.action, m.names)


def tensor(a: SteenrodModule, b: SteenrodModule) -> SteenrodModule:
    """Tensor product with the Cartan-formula action."""
    nb = b.dim
    degrees = [x + y for x in a.degrees for y in b.degrees]
    names = [f"{p}*{q}" for p in a.names for q in b.names]

    def cartan(i: int) -> Operator:
        cols = []
        for x in range(a.dim):
            for y in range(b.dim):
                v = 0
                for k in range(i + 1):
                    ax = a.milnor_ops[A.INDEX[(k, 0, 0)]][x]
                    by = b.milnor_ops[A.INDEX[(i - k, 0, 0)]][y]
                    for p in A.bits(ax):
                        for q in A.bits(by):
                            v ^= 1 << (p * nb + q)
                cols.append(v)
        return tuple(cols)

    return SteenrodModule.from_generators(degrees, cartan(1), cartan(2), cartan(4), names)


def dual(m: SteenrodModule) -> SteenrodModule:
    """Linear dual: degrees negated, theta acting as the transpose of chi(theta)."""
    n = m.dim
    ops = {k: transpose(m.op(A.chi(A.sq(k))), n) for k in A.GENERATORS}
    d = SteenrodModule.from_generators([-x for x in m.degrees], ops[1], ops[2], ops[4],
                                       [f"{x}^" for x in m.names])
    return d.sorted_by_degree()


def direct_sum(*ms: SteenrodModule) -> SteenrodModule:
    degrees, names, action, off = [], [], {}, 0
    for m in ms:
        degrees += m.degrees
        names += m.names
        for (i, g), ts in m.action.items():
            action[(i, g + off)] = frozenset(t + off for t in ts)
        off += m.dim
    return SteenrodModule(degrees, action, names)


# ---------------------------------------------------------------------------
# Margolis homology


def margolis_homology(m: SteenrodModule, op: str | int) -> dict[int, int]:
    """Degree -> dimension of ker(op) / im(op) for a square-zero op."""
    element = A.NAMED[op] if isinstance(op, str) else op
    rho = m.op(element)
    if any(apply(rho, x) for x in rho):
        raise NotExterior(f"{op if isinstance(op, str) else A.format_mask(op)} does not square to zero")
    shift = A.mask_degree(element) or 0
    out = {}
    for d in sorted(set(m.degrees)):
        src = m.basis_in_degree(d)
        pre = m.basis_in_degree(d - shift)
        # kernel on degree d
        _, _, ker = gf2.echelon_kernel([rho[i] for i in src], m.dim)
        im_rank = gf2.rank([rho[i] for i in pre], m.dim)
        h = len(ker) - im_rank
        if h:
            out[d] = h
    return out


# ---------------------------------------------------------------------------
# Hom spaces, quotients, isomorphisms, short exact sequences


def hom_basis(a: SteenrodModule, b: SteenrodModule, gens=A.GENERATORS) -> list[Operator]:
    """Basis of degree-preserving A(2)-maps a -> b (commuting with Sq^1, Sq^2, Sq^4)."""
    var = {}
    for i in range(a.dim):
        for j in b.basis_in_degree(a.degrees[i]):
            var[(i, j)] = len(var)
    if not var:
        return []
    rows = []
    for k in gens:
        sa, sb = a.sq(k), b.sq(k)
        # (f Sq^k - Sq^k f)(e_i) = 0, read off at each target l
        for i in range(a.dim):
            eqs: dict[int, int] = {}
            for i2 in A.bits(sa[i]):
                for l in b.basis_in_degree(a.degrees[i2]):
                    eqs[l] = eqs.get(l, 0) ^ (1 << var[(i2, l)])
            for j in b.basis_in_degree(a.degrees[i]):
                for l in A.bits(sb[j]):
                    eqs[l] = eqs.get(l, 0) ^ (1 << var[(i, j)])
            rows.extend(v for v in eqs.values() if v)
    maps = []
    inv = {v: k for k, v in var.items()}
    for x in gf2.nullspace(rows, len(var)):
        cols = [0] * a.dim
        for bit in A.bits(x):
            i, j = inv[bit]
            cols[i] |= 1 << j
        maps.append(tuple(cols))
    return maps


def is_module_map(f: Operator, a: SteenrodModule, b: SteenrodModule) -> bool:
    for k in A.GENERATORS:
        if compose(f, a.sq(k)) != compose(b.sq(k), f):
            return False
    return all(a.degrees[i] == b.degrees[j] for i in range(a.dim) for j in A.bits(f[i]))


def _combine(basis: Sequence[Operator], coeffs: int, n: int) -> Operator:
    out = _zero(n)
    for k in A.bits(coeffs):
        out = add_ops(out, basis[k])
    return out


def _degreewise_ranks(f: Operator, a: SteenrodModule, b: SteenrodModule) -> dict[int, int]:
    return {d: gf2.rank([f[i] for i in a.basis_in_degree(d)], b.dim) for d in set(a.degrees)}


def is_injective(f: Operator, a: SteenrodModule, b: SteenrodModule) -> bool:
    return gf2.rank(list(f), b.dim) == a.dim


def quotient(b: SteenrodModule, image: Sequence[int]) -> tuple[SteenrodModule, list[int]]:
    """b / span(image) (image must be a submodule); returns the quotient and
    the indices of b whose classes form its basis."""
    red = gf2.Reducer(image)
    _, pivots = gf2.rref(image, b.dim)
    piv = set(pivots)
    keep = [i for i in range(b.dim) if i not in piv]
    pos = {old: new for new, old in enumerate(keep)}

    def project(v: int) -> int:
        v = red.reduce(v)
        out = 0
        for bit in A.bits(v):
            out |= 1 << pos[bit]
        return out

    ops = {}
    for k in A.GENERATORS:
        s = b.sq(k)
        ops[k] = tuple(project(s[i]) for i in keep)
    q = SteenrodModule.from_generators([b.degrees[i] for i in keep], ops[1], ops[2], ops[4],
                                       [b.names[i] for i in keep])
    return q, keep


@dataclass
class IsoResult:
    found: bool
    map: Operator | None = None
    method: str = ""
    reason: str = ""
    hom_dim: int = 0

    def __bool__(self):
        return self.found


EXHAUSTIVE_LIMIT = 14
DEFAULT_TRIES = 4096


def _search(basis, accept, tries: int, seed: int):
    """Exhaustive search when the space is small, else seeded random sampling."""
    n = len(basis)
    if n <= EXHAUSTIVE_LIMIT:
        for c in range(1, 1 << n):
            hit = accept(c)
            if hit is not None:
                return hit, "exhaustive", True
        return None, "exhaustive", True
    rng = random.Random(seed)
    for _ in range(tries):
        c = rng.getrandbits(n)
        if c:
            hit = accept(c)
            if hit is not None:
                return hit, "random", False
    return None, "random", False


def iso_test(a: SteenrodModule, b: SteenrodModule, tries: int = DEFAULT_TRIES, seed: int = 0
             ) -> IsoResult:
    if a.graded_dims() != b.graded_dims():
        return IsoResult(False, reason="graded dimensions differ")
    if a.dim == 0:
        return IsoResult(True, (), "trivial")
    basis = hom_basis(a, b)
    if not basis:
        return IsoResult(False, reason="no nonzero module maps", method="linear algebra")

    def accept(c):
        f = _combine(basis, c, a.dim)
        return f if gf2.rank(list(f), b.dim) == a.dim else None

    f, method, complete = _search(basis, accept, tries, seed)
    if f is not None:
        return IsoResult(True, f, method, hom_dim=len(basis))
    why = "no bijective map in Hom" if complete else f"no bijective map among {tries} samples"
    return IsoResult(False, None, method, why, len(basis))


@dataclass
class SesReport:
    found: bool
    degree_table: list[tuple[int, int, int, int]]  # (degree, dim a, dim b, dim c)
    failed_degrees: list[int]
    injection: Operator | None = None
    iso: Operator | None = None
    hom_dim: int = 0
    method: str = ""
    reason: str = ""

    def certificate(self) -> str:
        lines = ["degree  dim(a)  dim(b)  dim(c)  ok"]
        for d, x, y, z in self.degree_table:
            lines.append(f"{d:6d}  {x:6d}  {y:6d}  {z:6d}  {'yes' if x + z == y else 'NO'}")
        lines.append(("found: " if self.found else "not found: ") + (self.reason or self.method))
        return "\n".join(lines)


def find_ses(a: SteenrodModule, b: SteenrodModule, c: SteenrodModule, *, homology: bool = False,
             tries: int = DEFAULT_TRIES, seed: int = 0) -> SesReport:
    """Look for 0 -> a -> b -> c -> 0.

    With ``homology=True`` the triple is read in comodule (homology) order and
    the dual sequence of cohomology modules 0 -> c -> b -> a -> 0 is searched.
    """
    if homology:
        a, c = c, a
    da, db, dc = a.graded_dims(), b.graded_dims(), c.graded_dims()
    degs = sorted(set(da) | set(db) | set(dc))
    table = [(d, da.get(d, 0), db.get(d, 0), dc.get(d, 0)) for d in degs]
    failed = [d for d, x, y, z in table if x + z != y]
    if failed:
        return SesReport(False, table, failed, method="dimension count",
                         reason=f"dimension count fails in degrees {failed}")
    if a.dim == 0:
        res = iso_test(b, c, tries, seed)
        return SesReport(res.found, table, [], (), res.map, 0, "a = 0", res.reason)
    basis = hom_basis(a, b)
    if not basis:
        return SesReport(False, table, [], method="linear algebra",
                         reason="no nonzero maps a -> b")

    def accept(coeffs):
        f = _combine(basis, coeffs, a.dim)
        if not is_injective(f, a, b):
            return None
        q, _ = quotient(b, list(f))
        res = iso_test(q, c, tries=256, seed=seed)
        return (f, res.map) if res.found else None

    hit, method, complete = _search(basis, accept, tries, seed)
    if hit is None:
        why = "no injection with the right cokernel" + ("" if complete else f" among {tries} samples")
        return SesReport(False, table, [], hom_dim=len(basis), method=method, reason=why)
    return SesReport(True, table, [], hit[0], hit[1], len(basis), method)
