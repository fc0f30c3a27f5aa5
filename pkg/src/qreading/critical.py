"""Critical number of signals for ideal memories.

For a land reflectivity of 1 the gain changes sign exactly once as the number
of signals ``M`` grows. The root of ``G(M) = 0`` (``M`` treated as real) is the
critical number; its ceiling is the smallest integer transmitter that beats
every classical one. The bath occupation is then chosen adversarially.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.optimize import bisect

from ._optimize import golden_section
from .bounds import log_classical_bound, log_quantum_bound
from .errors import DomainError, NoAdvantage, OptimizationError

M_MIN = 1e-3
M_MAX = 1e8
NB_MAX = 10.0
BISECT_ITERATIONS = 60
NO_ADVANTAGE_SAMPLES = 20
NB_GRID_POINTS = 40


def _check(r0, ns, nb=0.0):
    if not 0.0 <= r0 < 1.0:
        raise DomainError(f"r0 must lie in [0, 1), got {r0}")
    if not ns > 0:
        raise DomainError(f"ns must be > 0, got {ns}")
    if nb < 0:
        raise DomainError(f"nb must be >= 0, got {nb}")


def _ideal_logs(r0, nb, ns):
    """``(log F, log Q)`` for an ideal memory, accurate as ``r0 -> 1``."""
    loss = 1.0 - r0
    dip = loss / (1.0 + math.sqrt(r0))  # 1 - sqrt(r0)
    log_gamma = math.log1p(loss * nb)
    log_f = -log_gamma - dip**2 * ns / math.exp(log_gamma)
    log_q = -math.log((1.0 + dip * ns) ** 2 + nb * (2.0 * ns + 1.0) * loss)
    return log_f, log_q


def log_bound_ratio(m: float, r0: float, nb: float, ns: float) -> float:
    """``log C(m) - log Q(m)``; positive exactly when the gain is positive."""
    log_f, log_q = _ideal_logs(r0, nb, ns)
    return log_classical_bound(log_f, m) - log_quantum_bound(log_q, m)


def asymptote_r0_to_1(ns: float, eps: float) -> float:
    """Leading-order critical number ``1 / (4 ns (2 ns + 1) eps)`` near ``r0 = 1``."""
    if not ns > 0 or not eps > 0:
        raise DomainError("ns and eps must be positive")
    return 1.0 / (4.0 * ns * (2.0 * ns + 1.0) * eps)


def asymptote_high_energy(ns: float) -> float:
    """Approximate critical number at ``r0 = nb = 0`` for ``ns >= 1``.

    Returns ``ln 2 / (2 ln(1 + ns) - ns)``, or ``math.inf`` once the
    denominator is no longer positive (about ``ns > 2.513``).
    """
    if ns < 1:
        raise DomainError(f"the high-energy approximation needs ns >= 1, got {ns}")
    denom = 2.0 * math.log1p(ns) - ns
    if denom <= 0:
        return math.inf
    return math.log(2.0) / denom


def kappa(nb: float, ns: float, eps: float) -> float:
    """First-order threshold ``nb / ((nb + ns + 2 nb ns)^2 eps)`` near ``r0 = 1``."""
    return nb / ((nb + ns + 2.0 * nb * ns) ** 2 * eps)


def worst_bath(ns: float) -> float:
    """Bath occupation maximizing :func:`kappa`: ``ns / (1 + 2 ns)``."""
    return ns / (1.0 + 2.0 * ns)


def gain_small_eps(m: float, ns: float, eps: float) -> float:
    """Second-order gain at ``nb = 0``, ``r0 = 1 - eps``."""
    return m * ns * (4.0 * m * ns - 1.0) * eps**2 / (8.0 * math.log(2.0))


def _solve(r0, ns, nb, m_min, m_max):
    """Return ``(m_real, method)``; see :func:`critical_m`."""
    f = partial(_log_ratio_in_logm, r0=r0, nb=nb, ns=ns)
    lo, hi = math.log(m_min), math.log(m_max)
    f_hi = f(hi)
    if f_hi <= 0:
        approx = asymptote_r0_to_1(ns, 1.0 - r0)
        if approx >= m_max:
            return approx, "asymptotic"
        us = np.linspace(lo, hi, NO_ADVANTAGE_SAMPLES + 2)
        samples = [(math.exp(u), f(u)) for u in us]
        positive = [i for i, (_, v) in enumerate(samples) if v > 0]
        if not positive:
            raise NoAdvantage(
                f"no positive gain for M in [{m_min:g}, {m_max:g}] "
                f"(r0={r0}, ns={ns}, nb={nb})",
                r0=r0, ns=ns, nb=nb, m_max=m_max, samples=samples,
            )
        hi = us[positive[0]]
    if f(lo) > 0:
        raise OptimizationError(f"gain already positive at M={m_min:g}; lower the bracket")
    u = bisect(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=BISECT_ITERATIONS,
               disp=False)
    return math.exp(u), "bisection"


def _log_ratio_in_logm(u, *, r0, nb, ns):
    return log_bound_ratio(math.exp(u), r0, nb, ns)


def critical_m(r0: float, ns: float, nb: float, *, m_min: float = M_MIN, m_max: float = M_MAX) -> float:
    """Real root of ``G(M) = 0`` for an ideal memory.

    When the root lies beyond ``m_max`` because ``r0`` is close to 1 the
    leading-order asymptote is returned instead.

    Raises:
        NoAdvantage: if the gain stays non-positive over the whole bracket.
        DomainError: for ``r0 >= 1`` or invalid photon numbers.
    """
    _check(r0, ns, nb)
    return _solve(r0, ns, nb, m_min, m_max)[0]


@dataclass(frozen=True)
class CriticalPoint:
    r0: float
    ns: float
    m_real: float
    m_int: int
    nb_worst: float
    method: str = "bisection"


def _neg_critical(nb, *, r0, ns, m_min, m_max):
    return -_solve(r0, ns, nb, m_min, m_max)[0]


def critical_m_worst_case(
    r0: float,
    ns: float,
    *,
    nb_max: float = NB_MAX,
    m_min: float = M_MIN,
    m_max: float = M_MAX,
) -> CriticalPoint:
    """Critical number maximized over the bath occupation ``nb in [0, nb_max]``.

    A log-spaced grid (plus ``nb = 0`` and :func:`worst_bath`) locates the
    worst bath, then golden-section search refines it between the grid
    neighbours.
    """
    _check(r0, ns)
    nb_star = worst_bath(ns)
    grid = np.unique(np.concatenate([[0.0], np.logspace(-4, math.log10(nb_max), NB_GRID_POINTS),
                                     [min(nb_star, nb_max)]]))
    results = [_solve(r0, ns, nb, m_min, m_max) for nb in grid]
    if any(method == "asymptotic" for _, method in results):
        m = asymptote_r0_to_1(ns, 1.0 - r0)
        return CriticalPoint(r0, ns, m, math.ceil(m), nb_star, "asymptotic")
    values = np.array([m for m, _ in results])
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    nb_best, m_best = grid[i], values[i]
    if hi > lo:
        f = partial(_neg_critical, r0=r0, ns=ns, m_min=m_min, m_max=m_max)
        nb_ref, neg = golden_section(f, lo, hi, xtol=1e-6 * max(hi, 1e-3))
        if -neg > m_best:
            nb_best, m_best = nb_ref, -neg
    return CriticalPoint(r0, ns, float(m_best), max(1, math.ceil(m_best)), float(nb_best))


@dataclass(frozen=True)
class CurvePoint:
    r0: float
    m_real: float
    m_int: int | None
    nb_worst: float | None
    status: str


@dataclass
class CriticalCurve:
    ns: float
    points: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)

    def r0(self):
        return np.array([p.r0 for p in self.points])

    def m_real(self):
        return np.array([p.m_real for p in self.points])


def _curve_point(r0, *, ns, nb_max, m_max):
    try:
        cp = critical_m_worst_case(r0, ns, nb_max=nb_max, m_max=m_max)
    except NoAdvantage:
        return CurvePoint(r0, math.inf, None, None, "no-advantage")
    return CurvePoint(r0, cp.m_real, cp.m_int, cp.nb_worst, cp.method)


def critical_curve(
    ns: float,
    r0_grid,
    *,
    nb_max: float = NB_MAX,
    m_max: float = M_MAX,
    jobs: int = 1,
) -> CriticalCurve:
    """Worst-case critical number on a grid of pit reflectivities.

    Points without an advantage are recorded with status ``"no-advantage"``.
    Output order follows ``r0_grid`` regardless of ``jobs``.
    """
    grid = [float(r) for r in r0_grid]
    if not grid:
        raise DomainError("r0 grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("r0 grid must be strictly increasing")
    if grid[0] < 0 or grid[-1] >= 1:
        raise DomainError("r0 grid must lie in [0, 1)")
    work = partial(_curve_point, ns=ns, nb_max=nb_max, m_max=m_max)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(work, grid))
    else:
        points = [work(r) for r in grid]
    meta = {"r0_min": grid[0], "r0_max": grid[-1], "n": len(grid), "nb_max": nb_max, "m_max": m_max}
    return CriticalCurve(ns=ns, points=points, grid=meta)
