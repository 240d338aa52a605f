from fractions import Fraction

import pytest

from artifact.crofton import (
    InadmissibleCase,
    NumericallyAmbiguous,
    UniversalCase,
    _gate,
    centroaffine_literal,
    centroaffine_pairing,
    centroaffine_report,
    centroaffine_value,
    degenerate_pairing_routes,
    mu_c_vanishing,
    q2_basis_certificate,
    restriction_table,
    universal_pairing,
    universal_report,
)
from artifact.selberg import selberg_oracle

F = Fraction

# frozen exact values; the cases with at most 5 variables are re-derived from the chamber oracle below
ABS = {1: F(-2), 2: F(16, 45), 3: F(-1024, 496125), 4: F(524288, 1032475318875)}
SGN = {1: F(-4, 3), 2: F(64, 1575), 3: F(-16384, 343814625), 4: F(16777216, 6643978676960625)}
COS = {2: F(-2, 3), 4: F(-32, 525), 5: F(-256, 33075), 6: F(4096, 22920975), 8: F(4194304, 189827962198875)}
SIN = {2: F(-2, 3), 3: F(8, 15), 4: F(32, 525), 6: F(4096, 22920975), 7: F(-131072, 29499294825),
       8: F(-4194304, 189827962198875)}

# the four cases where the m = 0 combination is identically zero, for k and its dual
Q2_FAILURES = {(3, 2), (3, 3), (7, 4), (7, 5)}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_universal_abs_and_sgn(m):
    assert universal_pairing(UniversalCase("abs_2m", m)) == ABS[m]
    assert universal_pairing(UniversalCase("sgn_2m1", m)) == SGN[m]
    assert universal_report(UniversalCase("abs_2m", m)).certified


# the brute-force oracle is kept to n <= 5 variables for speed
@pytest.mark.parametrize("m", [1, 2])
def test_universal_against_oracle(m):
    s0 = F(-2 * m)
    assert selberg_oracle(2 * m - 1, "abs")(s0) == ABS[m]
    assert selberg_oracle(2 * m, "sgn")(s0 - 1) == SGN[m]


def test_abs_first_case_by_hand():
    # I_1(s) = 2/(s+1) at s = -2
    assert universal_pairing(UniversalCase("abs_2m", 1)) == -2


@pytest.mark.parametrize("p", range(2, 9))
def test_universal_cos_sin(p):
    for tag, table in (("cos_pp", COS), ("sin_pp", SIN)):
        case = UniversalCase(tag, p)
        if p in table:
            assert universal_pairing(case) == table[p] != 0
            if p - 1 <= 5:
                re, im = selberg_oracle(p - 1, "mixed")
                assert (re if tag == "cos_pp" else im)(case.s0) == table[p]
        else:
            with pytest.raises(InadmissibleCase):
                universal_pairing(case)


def test_universal_rejections():
    with pytest.raises(InadmissibleCase):
        UniversalCase("sin_pp", 1)
    with pytest.raises(ValueError):
        universal_pairing(UniversalCase("abs_2m", 7))
    with pytest.raises(ValueError):
        UniversalCase("tan_pp", 2)


def test_universal_s0():
    assert UniversalCase("abs_2m", 3).s0 == -6
    assert UniversalCase("sgn_2m1", 3).s0 == -7
    assert UniversalCase("cos_pp", 4).s0 == F(-9, 2)


def test_centroaffine_inadmissible():
    with pytest.raises(InadmissibleCase):
        centroaffine_pairing(3)
    with pytest.raises(InadmissibleCase):
        centroaffine_pairing(7)


@pytest.mark.parametrize("p", [2, 4, 5, 6, 8, 9])
def test_centroaffine_literal_vanishes(p):
    assert centroaffine_literal(p) == 0


@pytest.mark.parametrize("p,value", [
    (2, F(-4, 3)), (4, F(-64, 525)), (5, F(-256, 33075)), (6, F(8192, 22920975)),
    (8, F(8388608, 189827962198875)),
])
def test_centroaffine_certified_value(p, value):
    assert centroaffine_value(p) == value
    report = centroaffine_report(p)
    assert report.certified and report.details["literal_ball_value"] == "0"


def test_centroaffine_even_value_is_twice_cos():
    for p in (2, 4, 6, 8):
        c, _ = centroaffine_pairing(p)
        assert centroaffine_value(p) == 2 * c


@pytest.mark.parametrize("m", [2, 3])
def test_mu_c_vanishing(m):
    report = mu_c_vanishing(m)
    assert report.certified
    assert all(row["net"] <= 1 < m for row in report.pole_orders)


def test_mu_c_examples():
    rows = {tuple(r["kappa"]): r for r in mu_c_vanishing(2).pole_orders}
    assert (rows[(0, 0, 0)]["numerator"], rows[(0, 0, 0)]["denominator"], rows[(0, 0, 0)]["net"]) == (2, 1, 1)
    assert rows[(1, 0, 0)]["net"] <= 1
    assert rows[(2, 1, 1)]["net"] <= 1
    assert len(rows) == 19


def test_restriction_table_examples():
    assert restriction_table(5, 3, "0")[0].structural_zero
    assert restriction_table(5, 3, "pi/2")[2].structural_zero
    row = restriction_table(4, 3, "0")[1]
    assert (row.first, row.second) == (F(1, 2), F(0))
    assert row.describe() == "u(s, 1/2, 0)"
    with pytest.raises(ValueError):
        restriction_table(4, 5, "0")


def test_restriction_tables_are_mirror_images():
    for p in range(2, 9):
        for k in range(2, p + 1):
            for alpha in ("0", "pi/2"):
                live = [r for r in restriction_table(p, k, alpha) if not r.structural_zero]
                assert len(live) == 2
                assert (live[0].first, live[0].second) == (live[1].second, live[1].first)


def test_q2_examples():
    r = q2_basis_certificate(5, 3)
    assert r.certified and r.details["row"] == "row3"
    r = q2_basis_certificate(4, 2)
    assert r.certified and r.details["row"] == "row1"
    r = q2_basis_certificate(6, 3)
    assert r.certified and r.details["row"] == "row2"


def test_q2_exact_failure_set():
    failures = set()
    for p in range(2, 9):
        for k in range(2, p + 1):
            report = q2_basis_certificate(p, k)
            if not report.certified:
                failures.add((p, k))
                # every attempt fails on an identically zero combination
                for attempt in report.details["attempts"]:
                    bad = [e for e in attempt["entries"] if not e["ok"]]
                    assert bad and all(e.get("identically_zero") for e in bad)
    assert failures == Q2_FAILURES


def test_q2_row_pattern():
    for p in range(2, 9):
        for k in range(2, p + 1):
            row = q2_basis_certificate(p, k).details["row"]
            if p % 2 == 0:
                assert row in ("row1", "row2")
            else:
                assert row == ("row3" if p % 4 == 1 else "row4")


def test_ambiguity_gate():
    assert _gate(F(1, 10**12))
    assert not _gate(F(0))
    assert not _gate(0.0)
    assert not _gate(float("inf"))
    with pytest.raises(NumericallyAmbiguous):
        _gate(1e-12)


@pytest.mark.parametrize("s", [0, 2])
def test_degenerate_routes_m1(s):
    one, two = degenerate_pairing_routes(1, s)
    assert one == pytest.approx(two, abs=1e-6)


def test_degenerate_routes_m2():
    one, two = degenerate_pairing_routes(2, 0)
    assert one == pytest.approx(two, abs=1e-6)


def test_degenerate_routes_reject_bad_input():
    with pytest.raises(ValueError):
        degenerate_pairing_routes(3, 0)
    with pytest.raises(ValueError):
        degenerate_pairing_routes(1, 1)
