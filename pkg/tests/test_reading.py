import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qreading.channel import MemoryModel, SignalProfile
from qreading.errors import DomainError
from qreading.reading import (
    REFERENCE_TABLE,
    TABLE_DISCREPANCIES,
    binary_entropy,
    check_table,
    gain,
    round_sig,
    table_reports,
)


def test_binary_entropy_examples():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.49992, abs=1e-4)


@pytest.mark.parametrize("x", [-1e-9, 1.5, math.nan])
def test_binary_entropy_domain(x):
    with pytest.raises(DomainError):
        binary_entropy(x)


@given(st.floats(0, 1))
def test_binary_entropy_symmetric(x):
    assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-12)


def test_round_sig():
    assert round_sig(0.0062347) == 0.0062
    assert round_sig(0.225097) == 0.23
    assert round_sig(0.99062) == 0.99
    assert round_sig(0.0) == 0.0


@pytest.mark.parametrize("index", [0, 1, 2, 3, 5])
def test_table_rows(index):
    m, ns, r0, r1, nb, printed = REFERENCE_TABLE[index]
    g = gain(MemoryModel(r0, r1, nb), SignalProfile(m, ns)).gain
    assert round_sig(g) == printed


def test_table_row_with_known_discrepancy():
    m, ns, r0, r1, nb, printed = REFERENCE_TABLE[4]
    g = gain(MemoryModel(r0, r1, nb), SignalProfile(m, ns)).gain
    assert g == pytest.approx(TABLE_DISCREPANCIES[4], rel=1e-5)
    assert abs(g - printed) < 0.01


def test_check_table_statuses():
    checks = check_table()
    assert [c.status for c in checks] == ["match"] * 4 + ["discrepancy", "match"]
    assert all(c.ok for c in checks)
    strict = check_table(strict=True)
    assert not strict[4].ok


def test_check_table_flags_unknown_mismatch():
    reports = table_reports()
    reports[0] = gain(MemoryModel(0.5, 0.95, 0.01), SignalProfile(2, 3.5))
    assert check_table(reports)[0].status == "mismatch"


@given(st.floats(0, 1), st.floats(0, 3), st.floats(0.01, 3), st.integers(1, 10**4))
def test_zero_gain_for_identical_cells(r, nb, ns, m):
    rep = gain(MemoryModel(r, r, nb), SignalProfile(m, ns))
    assert rep.gain == 0.0
    assert rep.c_bound == rep.q_bound == 0.5


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 3), st.floats(0.01, 3), st.integers(1, 10**4))
def test_report_invariants(a, b, nb, ns, m):
    rep = gain(MemoryModel(min(a, b), max(a, b), nb), SignalProfile(m, ns))
    assert 0 <= rep.j_class <= 1 and 0 <= rep.j_quant <= 1
    assert -1 <= rep.gain <= 1
    assert rep.gain == pytest.approx(rep.j_quant - rep.j_class, abs=1e-15)
    assert rep.j_class == 1 - binary_entropy(rep.c_bound)


@pytest.mark.parametrize("row", REFERENCE_TABLE)
def test_advantage_survives_doubling(row):
    m, ns, r0, r1, nb, _ = row
    mem = MemoryModel(r0, r1, nb)
    g = gain(mem, SignalProfile(m, ns)).gain
    assert g > 0
    for k in (2, 4, 8):
        assert gain(mem, SignalProfile(k * m, ns)).gain > 0


def test_row_keys():
    row = table_reports()[3].row()
    assert list(row) == ["M", "N_S", "r0", "r1", "N_B", "C", "Q", "J_class", "J_quant", "G"]
    assert row["G"] == pytest.approx(5.9e-2, abs=5e-4)


def test_gain_sign_survives_saturation():
    # both error bounds are far below 1e-16, so J_class and J_quant round to 1
    rep = gain(MemoryModel(0.38, 0.85, 1.0), SignalProfile(240, 1.0))
    assert rep.j_class == rep.j_quant == 1.0
    assert rep.gain > 0
