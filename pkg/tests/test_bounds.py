import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qreading import bounds
from qreading.bounds import (
    bound_pair,
    chernoff_infimum,
    chernoff_qs,
    classical_bound,
    coherent_fidelity,
    gaussian_chernoff,
    ideal_chernoff_term,
    ideal_fidelity,
    log_classical_bound,
    quantum_bound,
)
from qreading.channel import Bit, MemoryModel, SignalProfile, output_cm
from qreading.errors import DomainError

# values pinned by the truncated-Fock oracle (see test_fock)
COHERENT_FIDELITY_PIN = 0.7775995661897106
CHERNOFF_HALF_PIN = 0.9318945488588147

memories = st.builds(
    lambda a, b, nb: MemoryModel(min(a, b), max(a, b), nb),
    st.floats(0, 1), st.floats(0, 1), st.floats(0, 5),
)


@pytest.mark.parametrize("nb,ns", [(0.0, 1.0), (0.3, 2.0), (5.0, 0.1)])
def test_fidelity_identical_channels(nb, ns):
    assert coherent_fidelity(MemoryModel(0.4, 0.4, nb), ns) == 1.0


def test_fidelity_examples():
    assert coherent_fidelity(MemoryModel(0.0, 1.0, 0.0), 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    f = coherent_fidelity(MemoryModel(0.5, 0.95, 0.01), 3.5)
    assert f == pytest.approx(COHERENT_FIDELITY_PIN, abs=1e-12)


@given(memories, st.floats(0, 20))
def test_fidelity_range(mem, ns):
    assert 0.0 < coherent_fidelity(mem, ns) <= 1.0


def test_classical_bound_examples():
    sig = SignalProfile(10, 1.0)
    assert classical_bound(MemoryModel(0.3, 0.3, 0.2), sig) == 0.5
    c = classical_bound(MemoryModel(0.0, 1.0, 0.0), sig)
    assert c == pytest.approx((1 - math.sqrt(1 - math.exp(-10))) / 2, rel=1e-12)
    assert c == pytest.approx(math.exp(-10) / 4, rel=1e-4)


def test_classical_bound_large_m_in_log_domain():
    mem = MemoryModel(0.0, 1.0, 0.0)
    c = classical_bound(mem, SignalProfile(500, 1.0))
    assert c == pytest.approx(math.exp(-500) / 4, rel=1e-12)
    assert log_classical_bound(-1.0, 2000) == pytest.approx(-2000 - math.log(4), rel=1e-15)


def test_chernoff_examples():
    mem = MemoryModel(0.3, 0.3, 0.2)
    assert chernoff_qs(mem, 1.0, 0.3) == 1.0
    assert chernoff_qs(MemoryModel(0.5, 0.8, 0.1), 1.0, 0.5) == pytest.approx(CHERNOFF_HALF_PIN, abs=1e-12)


@pytest.mark.parametrize("r0,nb,ns", [(0.0, 0.0, 1.0), (0.5, 1.0, 1.0), (0.9, 0.1, 0.3)])
def test_ideal_limit_of_numeric_trace(r0, nb, ns):
    q = chernoff_qs(MemoryModel(r0, 1.0, nb), ns, 1 - 1e-4)
    assert q == pytest.approx(ideal_chernoff_term(r0, nb, ns), abs=1e-3)


@given(memories, st.floats(0.01, 3), st.floats(0.01, 0.99))
def test_chernoff_symmetry(mem, ns, s):
    cm0, cm1 = output_cm(mem, Bit.PIT, ns), output_cm(mem, Bit.LAND, ns)
    if mem.r1 == 1.0:
        return  # closed forms only; the pure branch is covered elsewhere
    a = gaussian_chernoff(cm0, cm1, s)
    b = gaussian_chernoff(cm1, cm0, 1 - s)
    assert a == pytest.approx(b, rel=1e-9)
    assert 0 < a <= 1 + 1e-9


def test_quantum_bound_examples():
    assert quantum_bound(MemoryModel(0.2, 0.2, 0.1), SignalProfile(3, 1.0)).q_bound == 0.5
    for m, ns in [(1, 1.0), (7, 0.3), (1000, 0.05)]:
        qb = quantum_bound(MemoryModel(0.0, 1.0, 0.0), SignalProfile(m, ns))
        assert qb.q_bound == pytest.approx(0.5 * (1 + ns) ** (-2 * m), rel=1e-12)


def test_numeric_infimum_matches_ideal_closed_form():
    for r0, nb, ns in [(0.0, 0.0, 1.0), (0.5, 1.0, 1.0), (0.3, 0.05, 0.2)]:
        q, s_star, method = chernoff_infimum(MemoryModel(r0, 1.0, nb), ns, closed_form=False)
        assert method == "numeric"
        assert q == pytest.approx(ideal_chernoff_term(r0, nb, ns), rel=1e-6)


def test_numeric_infimum_reports_interior_s():
    q, s_star, method = chernoff_infimum(MemoryModel(0.5, 0.8, 0.1), 1.0)
    assert 0 < s_star < 1 and method == "numeric"
    grid = [chernoff_qs(MemoryModel(0.5, 0.8, 0.1), 1.0, s) for s in np.linspace(0.01, 0.99, 99)]
    assert q <= min(grid) + 1e-12


def test_ideal_chernoff_examples():
    assert ideal_chernoff_term(1.0, 0.7, 2.0) == 1.0
    assert ideal_chernoff_term(0.0, 0.0, 1.0) == 0.25
    # 1 / ((2 - sqrt(0.5))^2 + 1.5)
    assert ideal_chernoff_term(0.5, 1.0, 1.0) == pytest.approx(0.31530, abs=1e-5)


def test_ideal_fidelity_examples():
    assert ideal_fidelity(1.0, 0.4, 3.0) == 1.0
    assert ideal_fidelity(0.0, 0.0, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    gamma = 1.375
    assert ideal_fidelity(0.25, 0.5, 2.0) == pytest.approx(math.exp(-0.5 / gamma) / gamma, rel=1e-14)
    assert ideal_fidelity(0.25, 0.5, 2.0) == pytest.approx(0.5056, abs=1e-3)


@given(st.floats(0, 1), st.floats(0, 5), st.floats(0, 10))
def test_ideal_fidelity_reduction(r0, nb, ns):
    assert coherent_fidelity(MemoryModel(r0, 1.0, nb), ns) == pytest.approx(ideal_fidelity(r0, nb, ns), rel=1e-12)


@given(memories, st.floats(0.01, 3), st.integers(1, 10**5))
def test_bounds_at_most_half(mem, ns, m):
    pair = bound_pair(mem, SignalProfile(m, ns))
    assert 0 <= pair.c_bound <= 0.5
    assert 0 <= pair.q_bound <= 0.5
    if mem.r0 == mem.r1:
        assert pair.c_bound == pair.q_bound == 0.5


@given(memories, st.floats(0.01, 3), st.integers(1, 1000))
def test_bounds_monotone_in_m(mem, ns, m):
    a, b = bound_pair(mem, SignalProfile(m, ns)), bound_pair(mem, SignalProfile(m + 1, ns))
    assert b.c_bound <= a.c_bound and b.q_bound <= a.q_bound


@given(st.floats(0, 1), st.floats(1, 1e4))
def test_raw_power_inequality(x, m):
    # (1 - sqrt(1 - y)) = y / (1 + sqrt(1 - y)); compare logarithms to avoid underflow
    if x == 0.0:
        return
    log_lhs = m * (math.log(x) - math.log1p(math.sqrt(1 - x)))
    log_rhs = m * math.log(x) - math.log1p(math.sqrt(-math.expm1(m * math.log(x))))
    assert log_lhs <= log_rhs + 1e-12 * max(1.0, abs(log_rhs))


def test_prescan_handles_spurious_minimum(monkeypatch):
    calls = []
    real = bounds._chernoff_closed

    def bumpy(cm0, cm1, s):
        calls.append(s)
        return real(cm0, cm1, s) + (1e-3 * math.cos(40 * s) if 0 < s < 1 else 0.0)

    monkeypatch.setattr(bounds, "_chernoff_closed", bumpy)
    mem = MemoryModel(0.5, 0.8, 0.1)
    q, s_star, _ = chernoff_infimum(mem, 1.0)
    grid = [bumpy(output_cm(mem, 0, 1.0), output_cm(mem, 1, 1.0), s) for s in np.linspace(1e-6, 1 - 1e-6, 2001)]
    assert q <= min(grid) + 1e-7


@pytest.mark.parametrize("s", [0.0, 1.0, -0.2])
def test_chernoff_exponent_domain(s):
    with pytest.raises(DomainError):
        chernoff_qs(MemoryModel(0.1, 0.5), 1.0, s)


def test_input_validation():
    with pytest.raises(DomainError):
        coherent_fidelity(MemoryModel(0.1, 0.5), -1.0)
    with pytest.raises(DomainError):
        chernoff_infimum(MemoryModel(0.1, 0.5), 0.0)
    with pytest.raises(DomainError):
        ideal_chernoff_term(1.2, 0.0, 1.0)
