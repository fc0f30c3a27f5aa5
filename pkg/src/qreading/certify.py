"""Certification sweep: Gaussian closed forms against the Fock-space oracle.

Every oracle number is computed at two truncations ``d`` and ``2 d`` and is
accepted only if the two agree to ``convergence_tol``. The report collects
the worst deviation per quantity so one JSON document answers whether the
closed forms can be trusted.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import fock, gaussian
from .bounds import chernoff_qs, classical_bound, coherent_fidelity, quantum_bound
from .channel import Bit, MemoryModel, SignalProfile, output_cm
from .errors import DomainError, TruncationError

#: Largest cutoff the convergence loop may reach (at the doubled size).
MAX_DIM = 128


@dataclass(frozen=True)
class OracleSweep:
    ns_values: tuple = (0.1, 0.5, 1.0)
    r_values: tuple = (0.0, 0.3, 0.7, 0.95, 1.0)
    nb_values: tuple = (0.0, 0.1, 0.5)
    s_values: tuple = (0.25, 0.5, 0.75)
    tol: float = 1e-4
    convergence_tol: float = 1e-6
    slack: float = 1e-6
    moment_tol: float = 1e-6
    truncation_tol: float = fock.TRUNCATION_TOL
    dim: int | None = None  # fixed base truncation; None picks one per cell

    def __post_init__(self):
        for name in ("ns_values", "r_values", "nb_values", "s_values"):
            if not getattr(self, name):
                raise DomainError(f"{name} is empty")
        if any(ns <= 0 for ns in self.ns_values):
            raise DomainError("ns values must be positive")
        if any(not 0.0 <= r <= 1.0 for r in self.r_values):
            raise DomainError("reflectivities must lie in [0, 1]")
        if any(nb < 0 for nb in self.nb_values):
            raise DomainError("nb values must be >= 0")
        if any(not 0.0 < s < 1.0 for s in self.s_values):
            raise DomainError("s values must lie in (0, 1)")
        if self.dim is not None and self.dim < 2:
            raise DomainError("dim must be at least 2")


def base_dim(ns: float, nb: float, tol: float = fock.TRUNCATION_TOL) -> int:
    """Smallest cutoff whose geometric photon tail is below ``tol / 10``."""
    x = max(ns / (1.0 + ns), nb / (1.0 + nb))
    if x == 0.0:
        return 4
    return max(4, math.ceil(math.log(tol / 10.0) / math.log(x)))


@dataclass
class _Quantity:
    tol: float
    max_deviation: float = 0.0
    worst: dict | None = None

    def record(self, deviation, **where):
        if deviation > self.max_deviation or self.worst is None:
            self.max_deviation = float(deviation)
            self.worst = where

    @property
    def passed(self):
        return self.max_deviation <= self.tol


@dataclass
class OracleReport:
    sweep: OracleSweep
    quantities: dict
    failures: list = field(default_factory=list)
    cells: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "sweep": asdict(self.sweep),
            "cells": self.cells,
            "passed": self.passed,
            "quantities": {
                k: {"max_deviation": q.max_deviation, "tol": q.tol, "passed": q.passed, "worst": q.worst}
                for k, q in self.quantities.items()
            },
            "failures": self.failures,
        }


class _StateCache:
    """Truncated channel outputs keyed by ``(kind, r, nb, ns, dim)``."""

    def __init__(self, tol):
        self.tol = tol
        self._store = {}

    def get(self, kind, r, nb, ns, dim):
        nb = 0.0 if r == 1.0 else nb
        key = (kind, r, nb, ns, dim)
        if key not in self._store:
            if kind == "epr":
                probe = fock.tmsv_ket(ns, dim, tol=self.tol)
            else:
                probe = fock.coherent_ket(math.sqrt(ns), dim, tol=self.tol)
            self._store[key] = fock.apply_loss(probe, r, nb, tol=self.tol)
        return self._store[key]


def _oracle_values(cache, ns, nb, rs, s_values, dim):
    """Oracle scalars for every pair ``r0 < r1`` at cutoff ``dim``."""
    out = {}
    for r0, r1 in combinations(rs, 2):
        coh0, coh1 = (cache.get("coherent", r, nb, ns, dim) for r in (r0, r1))
        epr0, epr1 = (cache.get("epr", r, nb, ns, dim) for r in (r0, r1))
        out[r0, r1, "fidelity"] = fock.uhlmann_fidelity(coh0, coh1)
        for s in s_values:
            out[r0, r1, f"chernoff@{s:g}"] = fock.chernoff_trace(epr0, epr1, s)
        out[r0, r1, "helstrom_coherent"] = fock.helstrom_error(coh0, coh1)
        out[r0, r1, "helstrom_epr"] = fock.helstrom_error(epr0, epr1)
    return out


def _converged_values(cache, sweep, ns, nb, rs):
    """Oracle values at ``2 dim``, growing ``dim`` until doubling is harmless.

    Returns ``(dim, values, largest change under doubling)``. With a fixed
    ``sweep.dim`` no growth happens and truncation errors propagate.
    """
    dim = sweep.dim or base_dim(ns, nb, sweep.truncation_tol)
    while True:
        try:
            lo = _oracle_values(cache, ns, nb, rs, sweep.s_values, dim)
            hi = _oracle_values(cache, ns, nb, rs, sweep.s_values, 2 * dim)
        except TruncationError as exc:
            if sweep.dim is not None or 2 * dim >= MAX_DIM:
                raise
            dim = math.ceil(1.25 * dim)
            continue
        change = {k: abs(hi[k] - lo[k]) for k in hi}
        worst = max(change.values(), default=0.0)
        if worst < sweep.convergence_tol or sweep.dim is not None or 2.5 * dim > MAX_DIM:
            return dim, hi, change
        dim = math.ceil(1.25 * dim)


def run_oracle_sweep(sweep: OracleSweep = OracleSweep(), *, progress=None) -> OracleReport:
    """Compare closed forms with the oracle on every cell of ``sweep``.

    A cell is one ``(ns, nb, r0 < r1)`` combination. Checked per cell: the
    coherent-probe fidelity, the Chernoff trace at each ``s``, the
    truncation convergence of all oracle scalars, and the single-copy
    sandwich ``C <= P_err(coherent)`` and ``P_err(EPR) <= Q``. The output
    covariance matrices of the EPR states are also compared with the
    Gaussian channel.

    ``progress``, if given, is called as ``progress(ns, nb, dim)`` after
    each ``(ns, nb)`` block.

    Raises:
        TruncationError: if a fixed ``sweep.dim`` is too small, or no cutoff
            below ``MAX_DIM`` meets the truncation tolerance.
    """
    q = {
        "fidelity": _Quantity(sweep.tol),
        "chernoff": _Quantity(sweep.tol),
        "moments": _Quantity(sweep.moment_tol),
        "convergence": _Quantity(sweep.convergence_tol),
        "sandwich_classical": _Quantity(sweep.slack),
        "sandwich_quantum": _Quantity(sweep.slack),
    }
    report = OracleReport(sweep=sweep, quantities=q)
    rs = sorted(set(sweep.r_values))
    for ns in sweep.ns_values:
        for nb in sweep.nb_values:
            cache = _StateCache(sweep.truncation_tol)
            dim, values, change = _converged_values(cache, sweep, ns, nb, rs)
            for (r0, r1, name), delta in change.items():
                q["convergence"].record(delta, ns=ns, nb=nb, r0=r0, r1=r1, quantity=name, dim=dim)

            for r in rs:
                _, cov = fock.quadrature_moments(cache.get("epr", r, nb, ns, 2 * dim))
                expected = output_cm(MemoryModel(r, 1.0, nb), Bit.PIT, ns).matrix()
                q["moments"].record(np.abs(cov - expected).max(), ns=ns, nb=nb, r=r)

            for r0, r1 in combinations(rs, 2):
                where = {"ns": ns, "nb": nb, "r0": r0, "r1": r1}
                mem = MemoryModel(r0, r1, nb)
                sig = SignalProfile(1, ns)
                fid = values[r0, r1, "fidelity"]
                q["fidelity"].record(abs(fid - coherent_fidelity(mem, ns)), **where)
                for s in sweep.s_values:
                    qs = values[r0, r1, f"chernoff@{s:g}"]
                    q["chernoff"].record(abs(qs - chernoff_qs(mem, ns, s)), s=s, **where)
                p_coh = values[r0, r1, "helstrom_coherent"]
                q["sandwich_classical"].record(max(0.0, classical_bound(mem, sig) - p_coh), **where)
                p_epr = values[r0, r1, "helstrom_epr"]
                q["sandwich_quantum"].record(max(0.0, p_epr - quantum_bound(mem, sig).q_bound), **where)
                report.cells += 1
            if progress is not None:
                progress(ns, nb, dim)

    report.failures = [
        {"quantity": k, "max_deviation": v.max_deviation, "tol": v.tol, "worst": v.worst}
        for k, v in q.items() if not v.passed
    ]
    return report


def thermal_power_check(nb_values=(0.1, 0.5, 1.0, 2.0), p_values=(0.25, 0.5, 0.75), dim=200):
    """Largest deviation of ``G_p`` and ``Lambda_p`` from truncated thermal states.

    ``Tr rho^p`` is compared with ``G_p(nu)`` and the variance of
    ``rho^p / Tr rho^p`` with ``Lambda_p(nu)``, where ``nu = 2 nb + 1``.
    """
    worst = 0.0
    for nb in nb_values:
        rho = fock.thermal_state(nb, dim)
        nu = 2.0 * nb + 1.0
        for p in p_values:
            worst = max(worst, abs(fock.power_trace(rho, p) - gaussian.gp(nu, p)))
            scaled = 2.0 * fock.mean_photons(fock.normalized_power(rho, p)) + 1.0
            worst = max(worst, abs(scaled - gaussian.lambda_p(nu, p)))
    return worst


@contextmanager
def perturbed_lambda(eps: float):
    """Scale ``gaussian.lambda_p`` by ``1 + eps`` inside the block.

    A sensitivity check for the sweep: any visible perturbation must make
    the certification fail.
    """
    original = gaussian.lambda_p

    def shifted(nu, p):
        return (1.0 + eps) * original(nu, p)

    gaussian.lambda_p = shifted
    try:
        yield
    finally:
        gaussian.lambda_p = original
