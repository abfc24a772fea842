from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tmfres import milnor as A
from tmfres.appendix import fixture_text, load_fixture, resolve_module
from tmfres.comodule import bo_module, build_standard, tmf_module
from tmfres.errors import DegreeMismatch, NotExterior, ParseError
from tmfres.modules import (SteenrodModule, direct_sum, dual, emit_bruner, find_ses, free_module,
                            iso_test, margolis_homology, parse_bruner, suspend, tensor,
                            validate_module)

STANDARD = ["BO(1)", "A2modA1", "M1", "DUAL_BO1", "F2"]


def module_by_name(name):
    return load_fixture(name) if name in ("F", "E") else build_standard(name)


@pytest.mark.parametrize("name", STANDARD + ["F", "E", "TMF(1)", "BO(2)"])
def test_standard_modules_validate(name):
    rep = validate_module(module_by_name(name))
    assert rep.ok, rep.lines()


def test_dimensions():
    # bo_j counts monomials of weight <= 4j in A//A(1)_*, tmf_j of weight <= 8j in A//A(2)_*
    assert [bo_module(j).dim for j in range(5)] == [1, 4, 11, 24, 47]
    assert build_standard("A2modA1").graded_dims() == {d: 1 for d in (0, 4, 6, 7, 10, 11, 13, 17)}
    assert tmf_module(1).graded_dims() == {0: 1, 8: 1, 12: 1, 14: 1, 15: 1}
    assert build_standard("M1").degrees == (0, 2, 3) or list(build_standard("M1").degrees) == [0, 2, 3]


def test_a2moda1_is_cyclic():
    m = build_standard("A2modA1")
    ops = m.milnor_ops
    spanned = {ops[i][0] for i in range(64)} - {0}
    assert len(spanned) == m.dim


def test_free_module_is_a2():
    f = free_module([0])
    assert f.dim == 64 and validate_module(f).ok
    assert sum(margolis_homology(f, "Q0").values()) == 0


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_bruner("")
    with pytest.raises(ParseError):
        parse_bruner("2\n0 1 2\n")
    with pytest.raises(ParseError):
        parse_bruner("2\n0 1\n0 1 2 1\n")
    with pytest.raises(ParseError):
        parse_bruner("2\n0 1\n0 1 1 5\n")
    with pytest.raises(ParseError):
        parse_bruner("2\n0 1\n0 1 1 1\n0 1 1 1\n")
    with pytest.raises(DegreeMismatch):
        parse_bruner("2\n0 2\n0 1 1 1\n")


def test_validation_catches_adem_failure():
    # Sq^1 Sq^1 = 0 fails
    m = parse_bruner("3\n0 1 2\n0 1 1 1\n1 1 1 2\n")
    rep = validate_module(m)
    assert not rep.ok and rep.adem_violations


def test_fixture_round_trip():
    for name in ("F", "E"):
        m = load_fixture(name)
        assert parse_bruner(emit_bruner(m)).action == m.action
        assert parse_bruner(fixture_text(name)).degrees == m.degrees


def test_margolis_known_values():
    bo = build_standard("BO(1)")
    assert margolis_homology(SteenrodModule([0]), "Q1") == {0: 1}
    assert sum(margolis_homology(bo, "Q2").values()) == 2
    with pytest.raises(NotExterior):
        margolis_homology(free_module([0]), A.sq(2))


def test_dual_and_suspension():
    bo = build_standard("BO(1)")
    assert iso_test(dual(dual(bo)), bo).found
    assert suspend(bo, 5).degrees == tuple(d + 5 for d in bo.degrees) or \
        list(suspend(bo, 5).degrees) == [d + 5 for d in bo.degrees]
    assert margolis_homology(suspend(bo, 5), "Q1") == {d + 5: k for d, k in margolis_homology(bo, "Q1").items()}


def test_tensor_kunneth():
    bo, m1 = build_standard("BO(1)"), build_standard("M1")
    t = tensor(bo, m1)
    assert t.dim == bo.dim * m1.dim and validate_module(t).ok
    # the Q_i are primitive; P21 is not (its coproduct has a Q1 (x) Q1 term)
    for op in ("Q0", "Q1", "Q2"):
        assert sum(margolis_homology(t, op).values()) == \
            sum(margolis_homology(bo, op).values()) * sum(margolis_homology(m1, op).values())


@pytest.mark.parametrize("pair", [("BO(1)", "M1"), ("M1", "M1"), ("F", "M1")])
def test_tensor_action_is_the_coproduct(pair):
    a, b = (module_by_name(x) for x in pair)
    t = tensor(a, b)
    for i in range(64):
        op = t.op(1 << i)
        for x in range(a.dim):
            for y in range(b.dim):
                want = 0
                for l, r in A.coproduct(i):
                    for p in A.bits(a.act(1 << l, 1 << x)):
                        for q in A.bits(b.act(1 << r, 1 << y)):
                            want ^= 1 << (p * b.dim + q)
                assert op[x * b.dim + y] == want


def test_p21_kunneth_fails_on_m1_squared():
    m1 = build_standard("M1")
    assert sum(margolis_homology(m1, "P21").values()) == 3
    assert sum(margolis_homology(tensor(m1, m1), "P21").values()) == 7


def test_iso_and_ses():
    bo = build_standard("BO(1)")
    assert not iso_test(bo, build_standard("M1")).found
    assert iso_test(direct_sum(bo, suspend(bo, 2)), direct_sum(suspend(bo, 2), bo)).found
    rep = find_ses(bo, build_standard("A2modA1"), suspend(dual(bo), 17), homology=True)
    assert rep.found and not rep.failed_degrees
    bad = find_ses(bo, build_standard("A2modA1"), bo)
    assert not bad.found and bad.failed_degrees


def test_resolve_module_specs(tmp_path):
    p = tmp_path / "m.module"
    p.write_text(fixture_text("F"))
    assert resolve_module(str(p)).dim == 20
    assert resolve_module("E").dim == 24
    assert min(resolve_module("DUAL_BO1@17").degrees) == 10
    with pytest.raises(ValueError):
        resolve_module("nonsense")


@given(st.sampled_from(STANDARD + ["F", "E"]), st.randoms(use_true_random=False))
def test_margolis_invariant_under_relabeling(name, rnd):
    m = module_by_name(name)
    perm = list(range(m.dim))
    rnd.shuffle(perm)
    p = m.permuted(perm)
    assert iso_test(m, p).found
    for op in ("Q0", "Q1", "Q2", "P21"):
        assert margolis_homology(p, op) == margolis_homology(m, op)


@given(st.sampled_from(STANDARD + ["F", "E"]), st.integers(-20, 20))
def test_emit_parse_round_trip(name, k):
    m = suspend(module_by_name(name), k)
    again = parse_bruner(emit_bruner(m))
    assert list(again.degrees) == list(m.degrees) and again.action == m.action
