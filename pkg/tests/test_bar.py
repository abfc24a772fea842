from __future__ import annotations

import pytest

from tmfres import gf2
from tmfres.bar import BarComplex, algebra_basis, bar_oracle
from tmfres.comodule import build_standard
from tmfres.errors import BudgetExceeded
from tmfres.ext import minimal_resolution
from tmfres.modules import SteenrodModule

F2 = SteenrodModule([0])


def test_algebra_sizes():
    assert [len(algebra_basis(a)) for a in ("A2", "A1", "A0")] == [64, 8, 2]


def test_boundary_squares_to_zero():
    bc = BarComplex(build_standard("M1"), "A2", 10)
    for s in range(2, 5):
        for t in range(4, 11):
            hi, lo = bc.boundary_rows(s, t), bc.boundary_rows(s - 1, t)
            for row in hi:
                acc: set = set()
                for c in row:
                    acc ^= lo[c]
                assert not acc


def test_ext_a0_is_polynomial_on_h0():
    assert bar_oracle(F2, 6, 6, algebra="A0").dims == {(s, s): 1 for s in range(7)}


def test_ext_a1_low_degrees():
    # Ext_A(1)(F2): h0, h1 in (n, s) = (0, 1), (1, 1); h1^2; no h1^3; stem 4 at s = 3
    dims = bar_oracle(F2, 5, 9, algebra="A1").dims
    pos = {(t - s, s) for (s, t) in dims}
    assert {(1, 1), (2, 2), (4, 3), (4, 4)} <= pos and (3, 3) not in pos


@pytest.mark.parametrize("name", ["F2", "BO(1)", "M1", "A2modA1"])
def test_backends_agree(name):
    m = build_standard(name)
    out = {}
    for b in gf2.available_backends():
        gf2.set_backend(b)
        out[b] = bar_oracle(m, 9, 9).dims
    gf2.set_backend("compiled")
    assert len({str(v) for v in out.values()}) == 1


def test_matches_resolver_small():
    m = build_standard("DUAL_BO1")
    assert bar_oracle(m, 8, 6).dims == minimal_resolution(m, 8, 6).ext_dims()


def test_budget_keeps_partial():
    with pytest.raises(BudgetExceeded) as info:
        bar_oracle(F2, 10, 14, budget=1000)
    res = info.value.partial
    assert res.t_done is not None and res.dims


def test_negative_degrees_are_shifted_back():
    m = build_standard("DUAL_BO1")
    with pytest.raises(BudgetExceeded) as info:
        bar_oracle(m, 10, 8, budget=2000)
    assert info.value.info["t"] == 5
    assert min(t for _, t in info.value.partial.dims) == -7
