"""Reproduction checks shared by ``tmfres verify`` and the test-suite."""

from __future__ import annotations

from . import brown_gitler as bg
from . import decomposition as dc
from .appendix import Check, appendix_checks, load_fixture
from .bar import bar_oracle
from .comodule import build_standard
from .ext import minimal_resolution
from .modules import SteenrodModule, tensor


def table_checks() -> list[Check]:
    out = []
    for label, diffs in (("Table 1", bg.compare_table1(16)), ("Table 2", bg.compare_table2(16))):
        bad = [d for d in diffs if not d.ok]
        detail = f"{len(diffs) - len(bad)}/{len(diffs)} rows"
        if bad:
            detail += "; differing rows " + ", ".join(str(d.index) for d in bad)
        out.append(Check(label, not bad and len(diffs) == (14 if label == "Table 1" else 16), detail))
    return out


def decomposition_checks() -> list[Check]:
    out = []
    for k, printed in dc.printed_decompositions().items():
        got = dc.decompose_power(k)
        out.append(Check(f"bo_1^{k} splitting", got == printed, str(got)))
    bo = dc.parse_report("S^{0,0}bo1")
    want = dc.parse_report("S^{-16,-1}bo1")
    d = dc.dualize_report(bo)
    out.append(Check("D(bo_1) = S^{-16,-1} bo_1", d.summands == want.summands, str(d)))
    return out


def lemma_checks(j_max: int = 64) -> list[Check]:
    parity = all(bg.verify_parity(j) for j in range(1, j_max + 1))
    mod_y = all(bg.compare_mod_y(j) for j in range(1, j_max + 1))
    return [Check(f"parity of f_j, j <= {j_max}", parity),
            Check(f"f_j mod y equals the g-local f'_j, j <= {j_max}", mod_y)]


def census_checks(weight_max: int = 64) -> list[Check]:
    cal = dc.calibrate_q1_shift(weight_max)
    window = dc.Window(-8, 120, 0, 24)
    census = dc.census_bbt(1, window, weight_max)
    series = dc.decomposition_series(1, window, weight_max)
    return [Check("Q1 shift calibration", cal == {-3: True, 3: False}, str(cal)),
            Check(f"census = decompositions (n = 1, weight <= {weight_max})",
                  census.dims == series.dims, f"{sum(census.dims.values())} classes in window")]


def oracle_modules() -> list[tuple[str, SteenrodModule, int]]:
    """(name, module, t_max offset) for the oracle comparisons; the tensor square
    uses a smaller window."""
    bo = build_standard("BO(1)")
    return [("F2", SteenrodModule([0]), 0), ("BO(1)", bo, 0), ("BO(1)^2", tensor(bo, bo), -6),
            ("M1", build_standard("M1"), 0), ("A2modA1", build_standard("A2modA1"), 0),
            ("E", load_fixture("E"), 0)]


def oracle_checks(t_max: int = 12) -> list[Check]:
    out = []
    for name, m, off in oracle_modules():
        T = t_max + off
        res = minimal_resolution(m, T, T).ext_dims()
        bar = bar_oracle(m, T, T).dims
        out.append(Check(f"Ext({name}) = bar complex, t <= {T}", res == bar,
                         f"{sum(res.values())} classes"))
    res = minimal_resolution(build_standard("A2modA1"), t_max, t_max).ext_dims()
    a1 = bar_oracle(SteenrodModule([0]), t_max, t_max, algebra="A1").dims
    out.append(Check(f"Ext_A(2)(A(2)//A(1)) = Ext_A(1)(F2), t <= {t_max}", res == a1))
    return out


GROUPS = {
    "tables": table_checks,
    "splittings": decomposition_checks,
    "appendix": lambda: appendix_checks().checks,
    "oracle": oracle_checks,
    "lemmas": lemma_checks,
    "census": census_checks,
}
