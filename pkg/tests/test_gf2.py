from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tmfres import gf2
from tmfres.gf2 import _pure

BACKENDS = gf2.available_backends()


def naive_rank(rows, ncols):
    m = [[(r >> c) & 1 for c in range(ncols)] for r in rows]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                m[i] = [a ^ b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def matrices(max_cols=80, max_rows=40):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.tuples(st.lists(st.integers(0, 2**n - 1), max_size=max_rows), st.just(n)))


@pytest.fixture(params=BACKENDS)
def backend(request):
    old = gf2.backend()
    gf2.set_backend(request.param)
    yield request.param
    gf2.set_backend(old)


def test_compiled_backend_built():
    assert "compiled" in BACKENDS


def test_unknown_backend():
    with pytest.raises(ValueError):
        gf2.set_backend("fortran")


def test_identity_and_zero(backend):
    assert gf2.rank([1 << i for i in range(70)], 70) == 70
    assert gf2.rref([0, 0], 5) == ([], [])
    assert gf2.nullspace([0b11], 2) == [0b11]


@given(matrices())
def test_rank_matches_naive(case):
    rows, n = case
    want = naive_rank(rows, n)
    for b in BACKENDS:
        gf2.set_backend(b)
        assert gf2.rank(rows, n) == want
    gf2.set_backend(BACKENDS[0] if "compiled" not in BACKENDS else "compiled")


@given(matrices(max_cols=130))
def test_backends_agree(case):
    rows, n = case
    outs = []
    for b in BACKENDS:
        gf2.set_backend(b)
        outs.append((gf2.rref(rows, n), gf2.echelon_kernel(rows, n)))
    gf2.set_backend("compiled" if "compiled" in BACKENDS else "python")
    assert all(o == outs[0] for o in outs)


@given(matrices())
def test_rref_is_reduced(case):
    rows, n = case
    red, piv = gf2.rref(rows, n)
    assert piv == sorted(piv) and len(red) == len(piv)
    for r, p in zip(red, piv):
        assert r & -r == 1 << p
        assert all(not (o >> p) & 1 for o in red if o is not r)


@given(matrices())
def test_kernel(case):
    rows, n = case
    _, _, ker = gf2.echelon_kernel(rows, n)
    assert len(ker) == len(rows) - naive_rank(rows, n)
    for combo in ker:
        acc = 0
        for i in range(len(rows)):
            if (combo >> i) & 1:
                acc ^= rows[i]
        assert acc == 0


@given(matrices())
def test_nullspace(case):
    rows, n = case
    null = gf2.nullspace(rows, n)
    assert len(null) == n - naive_rank(rows, n)
    for x in null:
        assert all(bin(r & x).count("1") % 2 == 0 for r in rows)


@given(matrices())
def test_reducer(case):
    rows, n = case
    red = gf2.Reducer()
    grown = sum(1 for r in rows if red.add(r))
    assert grown == len(red) == naive_rank(rows, n)
    assert all(red.contains(r) for r in rows)


@given(matrices(max_cols=60))
def test_sparse_rank(case):
    rows, n = case
    sets = [{c for c in range(n) if (r >> c) & 1} for r in rows]
    want = naive_rank(rows, n)
    assert _pure.sparse_rank([set(s) for s in sets], n) == want
    assert gf2.sparse_rank([set(s) for s in sets], n) == want
