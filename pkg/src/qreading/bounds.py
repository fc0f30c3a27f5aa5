"""Error-probability bounds for reading one memory cell.

The classical bound holds for every transmitter with a positive
P-representation and depends only on the fidelity of the two coherent-probe
outputs. The quantum bound is the Chernoff bound of an EPR transmitter made of
``m`` two-mode squeezed vacua.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import gaussian
from ._optimize import prescan_minimize
from .channel import Bit, MemoryModel, SignalProfile, output_cm
from .errors import DomainError, OptimizationError
from .gaussian import PURE_TOL, TwoModeNormalCM, williamson

#: Search interval for the Chernoff exponent.
S_BRACKET = (1e-6, 1.0 - 1e-6)
S_XTOL = 1e-9
S_PRESCAN = 21

#: Land reflectivities above this use the ideal-memory closed forms.
NEAR_IDEAL = 1.0 - 1e-9

# Two-mode outputs: the Gaussian trace formula carries a 2**n prefactor.
_N_MODES = 2


@dataclass(frozen=True)
class QuantumBound:
    q_bound: float
    chernoff_term: float
    s_star: Optional[float]
    method: str


@dataclass(frozen=True)
class BoundPair:
    c_bound: float
    q_bound: float
    s_star: Optional[float] = None


def _check_ns(ns, strict=True):
    if (strict and not ns > 0) or ns < 0:
        raise DomainError(f"ns must be {'> 0' if strict else '>= 0'}, got {ns}")


# -- classical side ---------------------------------------------------------

def log_coherent_fidelity(mem: MemoryModel, ns: float) -> float:
    """Logarithm of :func:`coherent_fidelity`, accurate when the fidelity is near 1."""
    _check_ns(ns, strict=False)
    r0, r1, nb = mem.r0, mem.r1, mem.nb
    if r0 == r1:
        return 0.0
    gm1 = (2.0 - r0 - r1) * nb  # gamma - 1
    gamma = 1.0 + gm1
    theta = 4.0 * nb**2
    for r in (r0, r1):
        theta *= (1.0 - r) * (1.0 + (1.0 - r) * nb)
    # 1 / (sqrt(g^2 + t) - sqrt(t)) = (sqrt(g^2 + t) + sqrt(t)) / g^2
    root = math.sqrt(gamma**2 + theta)
    log_prefactor = math.log1p((gm1 * (gamma + 1.0) + theta) / (root + 1.0) + math.sqrt(theta))
    log_prefactor -= 2.0 * math.log1p(gm1)
    dip = (r1 - r0) / (math.sqrt(r1) + math.sqrt(r0))  # sqrt(r1) - sqrt(r0)
    return min(0.0, log_prefactor - dip**2 * ns / gamma)


def coherent_fidelity(mem: MemoryModel, ns: float) -> float:
    """Fidelity between the two cell outputs of the coherent probe ``|sqrt(ns)>``.

    ``F = exp(-(sqrt(r1) - sqrt(r0))^2 ns / gamma) / (sqrt(gamma^2 + theta) - sqrt(theta))``
    with ``gamma = 1 + (2 - r0 - r1) nb`` and
    ``theta = 4 nb^2 prod_i (1 - r_i)(1 + (1 - r_i) nb)``.
    """
    return math.exp(log_coherent_fidelity(mem, ns))


def ideal_fidelity(r0: float, nb: float, ns: float) -> float:
    """Coherent-probe fidelity for a memory whose land is a perfect mirror."""
    _check_ns(ns, strict=False)
    gamma = 1.0 + (1.0 - r0) * nb
    return math.exp(-((1.0 - math.sqrt(r0)) ** 2) * ns / gamma) / gamma


def log_classical_bound(log_fidelity: float, m: float) -> float:
    """``log C`` for ``C = (1 - sqrt(1 - F^m)) / 2``, valid for real ``m > 0``."""
    if not log_fidelity <= 0.0:
        raise DomainError(f"log fidelity must be <= 0, got {log_fidelity}")
    log_fm = m * log_fidelity
    # 1 - sqrt(1 - x) = x / (1 + sqrt(1 - x))
    return log_fm - math.log(2.0 * (1.0 + math.sqrt(-math.expm1(log_fm))))


def classical_bound(mem: MemoryModel, sig: SignalProfile) -> float:
    """Lower bound on the readout error of any classical transmitter."""
    return math.exp(log_classical_bound(log_coherent_fidelity(mem, sig.ns), sig.m))


# -- quantum side -----------------------------------------------------------

def _power_terms(cm: TwoModeNormalCM, p: float):
    """Blocks ``(A, B, C)`` of ``S (Lambda_p I + Lambda_p I) S^T`` and ``prod G_p``.

    ``p = 0`` is accepted only for pure states, where both functions are 1.
    """
    dec = williamson(cm)
    nus = (dec.nu1, dec.nu2)
    if p == 0.0:
        if any(abs(nu - 1.0) >= PURE_TOL for nu in nus):
            raise DomainError("zero power of a mixed state is unbounded")
        lam1 = lam2 = 1.0
        gprod = 1.0
    else:
        lam1, lam2 = (gaussian.lambda_p(nu, p) for nu in nus)
        gprod = gaussian.gp(nus[0], p) * gaussian.gp(nus[1], p)
    xp2, xm2 = dec.x_plus**2, dec.x_minus**2
    a = xp2 * lam1 + xm2 * lam2
    b = xm2 * lam1 + xp2 * lam2
    c = dec.x_plus * dec.x_minus * (lam1 + lam2)
    return a, b, c, gprod


def _chernoff_closed(cm0, cm1, s):
    a0, b0, c0, g0 = _power_terms(cm0, s)
    a1, b1, c1, g1 = _power_terms(cm1, 1.0 - s)
    # det of a normal-form sum is (AB - C^2)^2
    sqrt_det = abs((a0 + a1) * (b0 + b1) - (c0 + c1) ** 2)
    return 2**_N_MODES * g0 * g1 / sqrt_det


def gaussian_chernoff(cm0: TwoModeNormalCM, cm1: TwoModeNormalCM, s: float) -> float:
    """``Tr(rho0^s rho1^(1-s))`` for two zero-mean normal-form Gaussian states."""
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    return _chernoff_closed(cm0, cm1, s)


def chernoff_qs(mem: MemoryModel, ns: float, s: float) -> float:
    """Chernoff trace of the two EPR-transmitter outputs at exponent ``s``."""
    _check_ns(ns)
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    if mem.r0 == mem.r1:
        return 1.0
    return _chernoff_closed(output_cm(mem, Bit.PIT, ns), output_cm(mem, Bit.LAND, ns), s)


def _is_pure(cm):
    nu1, nu2 = gaussian.symplectic_spectrum(cm)
    return abs(nu1 - 1.0) < PURE_TOL and abs(nu2 - 1.0) < PURE_TOL


def chernoff_infimum(mem: MemoryModel, ns: float, *, closed_form: bool = True):
    """Infimum over ``s`` of the Chernoff trace.

    Returns ``(Q, s_star, method)``. With ``closed_form=True`` ideal and
    near-ideal memories use :func:`ideal_chernoff_term`; otherwise the Gaussian
    trace is minimized numerically. When an output is pure the trace extends
    continuously to the matching endpoint of ``[0, 1]``, and that endpoint
    value is included in the infimum.
    """
    _check_ns(ns)
    if mem.r0 == mem.r1:
        return 1.0, None, "identical"
    if closed_form and mem.r1 > NEAR_IDEAL:
        return ideal_chernoff_term(mem.r0, mem.nb, ns), None, "ideal-closed-form"
    cm0 = output_cm(mem, Bit.PIT, ns)
    cm1 = output_cm(mem, Bit.LAND, ns)
    try:
        s_star, q, _ = prescan_minimize(
            lambda s: _chernoff_closed(cm0, cm1, s), *S_BRACKET, points=S_PRESCAN, xtol=S_XTOL
        )
    except (ValueError, ArithmeticError) as exc:
        raise OptimizationError(f"Chernoff search failed for {mem}, ns={ns}: {exc}") from exc
    for s_end, cm in ((1.0, cm1), (0.0, cm0)):
        if _is_pure(cm):
            q_end = _chernoff_closed(cm0, cm1, s_end)
            if q_end < q:
                q, s_star = q_end, s_end
    return q, s_star, "numeric"


def quantum_bound(mem: MemoryModel, sig: SignalProfile, *, closed_form: bool = True) -> QuantumBound:
    """Chernoff upper bound ``Q^m / 2`` on the EPR transmitter's readout error."""
    q, s_star, method = chernoff_infimum(mem, sig.ns, closed_form=closed_form)
    return QuantumBound(
        q_bound=math.exp(log_quantum_bound(math.log(q), sig.m)),
        chernoff_term=q,
        s_star=s_star,
        method=method,
    )


def log_quantum_bound(log_chernoff: float, m: float) -> float:
    """``log(Q^m / 2)`` for real ``m``."""
    if not log_chernoff <= 0.0:
        raise DomainError(f"log Chernoff term must be <= 0, got {log_chernoff}")
    return m * log_chernoff - math.log(2.0)


def ideal_chernoff_term(r0: float, nb: float, ns: float) -> float:
    """Closed-form Chernoff term of an ideal memory (land reflectivity 1)."""
    _check_ns(ns)
    if not 0.0 <= r0 <= 1.0:
        raise DomainError(f"r0 must lie in [0, 1], got {r0}")
    if nb < 0:
        raise DomainError(f"nb must be >= 0, got {nb}")
    return 1.0 / ((1.0 + (1.0 - math.sqrt(r0)) * ns) ** 2 + nb * (2.0 * ns + 1.0) * (1.0 - r0))


def bound_pair(mem: MemoryModel, sig: SignalProfile) -> BoundPair:
    qb = quantum_bound(mem, sig)
    return BoundPair(c_bound=classical_bound(mem, sig), q_bound=qb.q_bound, s_star=qb.s_star)
