from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmfres import ext as E
from tmfres import gf2
from tmfres.appendix import load_fixture
from tmfres.comodule import build_standard
from tmfres.errors import BudgetExceeded, WindowTooSmall
from tmfres.modules import SteenrodModule, suspend, tensor

F2 = SteenrodModule([0])

# Ext_A(2)(F2) for t <= 14, as (n, s): h0-tower, h1, h1^2, h2, h0 h2,
# h0^2 h2, h2^2, c0, the v1^4-tower from (8, 4), h1 c0, h1 w1 (computed by the bar oracle)
LOW_STEMS = {(1, 1), (2, 2), (3, 1), (3, 2), (3, 3), (6, 2), (8, 3), (8, 4), (8, 5), (8, 6),
             (9, 4), (9, 5)} | {(0, s) for s in range(15)}


def chart(m, s_max, t_max, **kw):
    return E.chart_from_resolution(E.minimal_resolution(m, s_max, t_max, **kw))


def test_low_stems_of_trivial_module():
    c = chart(F2, 14, 14)
    got = {(t - s, s) for (s, t), d in c.dims.items() if d and t - s <= 9}
    assert got == LOW_STEMS
    assert all(d == 1 for (s, t), d in c.dims.items() if t - s <= 9)


def test_resolution_invariants():
    res = E.minimal_resolution(load_fixture("E"), 8, 24)
    assert res.check_d_squared() and res.is_minimal()
    assert res.stages[0].degrees == [0, 8, 10]  # A(2)-generators of E


def test_products_h0_h1_h2():
    c = chart(F2, 4, 10)
    unit = c.generators[(0, 0)][0]
    h = {i: c.products.get((i, 0, unit), []) for i in range(3)}
    assert all(len(v) == 1 for v in h.values())
    assert c.products.get((2, 1, h[2][0]))   # h2^2 != 0 at (6, 2)
    assert c.products.get((0, 1, h[2][0]))   # h0 h2 != 0
    assert not c.products.get((1, 1, h[2][0]))  # h1 h2 = 0
    assert not c.products.get((0, 1, h[1][0]))  # h0 h1 = 0


def test_h1_cubed_vanishes_over_a1():
    c = chart(build_standard("A2modA1"), 4, 8)
    unit = c.generators[(0, 0)][0]
    h1 = c.products[(1, 0, unit)]
    h1sq = [g for x in h1 for g in c.products.get((1, 1, x), [])]
    assert h1sq and not [g for x in h1sq for g in c.products.get((1, 2, x), [])]


@pytest.mark.parametrize("name", ["F2", "BO(1)", "M1"])
def test_full_strategy_minimizes_to_minimal(name):
    m = build_standard(name)
    full = E.minimal_resolution(m, 5, 9, strategy="full")
    mini = E.minimal_resolution(m, 5, 9)
    want = {k: v for k, v in mini.ext_dims().items() if k[0] < 5}
    assert full.minimized_dims() == want
    assert sum(full.ext_dims().values()) >= sum(mini.ext_dims().values())


def test_backends_agree():
    m = tensor(build_standard("BO(1)"), build_standard("M1"))
    out = {}
    for b in gf2.available_backends():
        gf2.set_backend(b)
        out[b] = E.minimal_resolution(m, 8, 18).ext_dims()
    gf2.set_backend("compiled")
    assert len(set(map(str, out.values()))) == 1


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        E.minimal_resolution(F2, 10, 30, budget=10)
    assert info.value.partial is not None


def test_suspension_shifts_chart():
    a = E.minimal_resolution(F2, 4, 10).ext_dims()
    b = E.minimal_resolution(suspend(F2, 3), 4, 13).ext_dims()
    assert b == {(s, t + 3): d for (s, t), d in a.items()}


@settings(max_examples=10)
@given(st.sampled_from(["BO(1)", "M1", "A2modA1", "DUAL_BO1"]), st.randoms(use_true_random=False))
def test_chart_invariant_under_generator_permutation(name, rnd):
    m = build_standard(name)
    perm = list(range(m.dim))
    rnd.shuffle(perm)
    assert E.minimal_resolution(m.permuted(perm), 5, 12).ext_dims() == \
        E.minimal_resolution(m, 5, 12).ext_dims()


# --- towers


def test_monomial_counts():
    assert [E.monomial_count(n) for n in range(0, 28, 4)] == [1, 0, 1, 1, 1, 1, 2]
    assert E.expected_towers((0,), 24) == {0: 1, 8: 1, 12: 1, 16: 1, 20: 1, 24: 2}


def test_towers_trivial_module():
    rep = E.v0_tower_report(chart(F2, 16, 44), 24)
    assert rep.ok and rep.towers == {0: 1, 8: 1, 12: 1, 16: 1, 20: 1, 24: 2}


def test_towers_e_module_signature():
    rep = E.v0_tower_report(chart(load_fixture("E"), 16, 44), 24, generator_stems=(0, 4, 8, 12))
    assert rep.ok
    gens = E.tower_generators(rep.towers)
    assert sorted(gens.elements()) == [0, 4, 8, 12]
    assert sorted(g % 12 for g in E.tmf03_model_tower_stems()) == sorted(g % 12 for g in gens.elements())


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        E.v0_tower_report(chart(F2, 3, 10), 24)


def test_tower_generators_rejects_non_free():
    with pytest.raises(ValueError):
        E.tower_generators({0: 2, 8: 1})


# --- chart output


def test_chart_formats():
    c = chart(F2, 3, 8)
    assert E.chart_csv(c).splitlines()[:3] == ["s,t,dim", "0,0,1", "1,1,1"]
    txt = E.chart_text(c)
    assert txt.splitlines()[-1].split()[:3] == ["0", "1", "2"]
    svg = E.chart_svg(c)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == sum(c.dims.values())
    with pytest.raises(ValueError):
        E.chart_emit(c, "PNG")


def test_chart_output_deterministic():
    a = E.chart_svg(chart(build_standard("BO(1)"), 4, 12))
    b = E.chart_svg(chart(build_standard("BO(1)"), 4, 12))
    assert a == b
