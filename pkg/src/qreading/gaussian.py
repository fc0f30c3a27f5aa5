"""Two-mode Gaussian covariance matrices in the ``(aI, bI, cZ)`` normal form.

Quadrature convention used throughout the package: ``x = (q1, p1, q2, p2)``
with ``[x_k, x_l] = 2i Omega_kl``.  The vacuum has covariance matrix ``I``, a
thermal mode with ``n`` mean photons has ``(2n + 1) I``, and a coherent state
``|alpha>`` has mean ``(2 Re alpha, 2 Im alpha)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonPhysicalCM

#: Smallest admissible symplectic eigenvalue; absorbs round-off on pure states.
PHYSICALITY_TOL = 1e-9

#: Below this distance from 1 a symplectic eigenvalue is treated as exactly 1.
PURE_TOL = 1e-12

_I2 = np.eye(2)
_Z2 = np.diag([1.0, -1.0])


def symplectic_form(modes: int = 2) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic form ``Omega``."""
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class TwoModeNormalCM:
    """Covariance matrix ``[[a I, c Z], [c Z, b I]]``.

    Only the three scalars are stored; :meth:`matrix` materializes the dense
    ``4 x 4`` view.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a >= 1.0 - PHYSICALITY_TOL and self.b >= 1.0 - PHYSICALITY_TOL):
            raise NonPhysicalCM(f"diagonal blocks must be >= 1, got a={self.a}, b={self.b}")
        if self.c < 0:
            raise NonPhysicalCM(f"correlation c must be >= 0, got {self.c}")

    @property
    def y(self) -> float:
        # factored form keeps precision when the state is nearly pure
        s = self.a + self.b
        return (s - 2.0 * self.c) * (s + 2.0 * self.c)

    def matrix(self) -> np.ndarray:
        return np.block([[self.a * _I2, self.c * _Z2], [self.c * _Z2, self.b * _I2]])

    def det(self) -> float:
        return (self.a * self.b - self.c**2) ** 2

    def is_physical(self) -> bool:
        try:
            symplectic_spectrum(self)
        except NonPhysicalCM:
            return False
        return True


@dataclass(frozen=True)
class SymplecticDecomposition:
    """Williamson data ``V = S (nu1 I + nu2 I) S^T`` for a normal-form CM."""

    nu1: float
    nu2: float
    x_plus: float
    x_minus: float

    def symplectic_matrix(self) -> np.ndarray:
        xp, xm = self.x_plus, self.x_minus
        return np.block([[xp * _I2, xm * _Z2], [xm * _Z2, xp * _I2]])

    def williamson_form(self) -> np.ndarray:
        return np.diag([self.nu1, self.nu1, self.nu2, self.nu2])

    def reconstruct(self) -> np.ndarray:
        S = self.symplectic_matrix()
        return S @ self.williamson_form() @ S.T


@dataclass(frozen=True)
class SingleModeGaussian:
    """Single-mode Gaussian state with isotropic covariance ``cm_scale * I``."""

    mean_q: float
    mean_p: float
    cm_scale: float

    def __post_init__(self):
        if self.cm_scale < 1.0 - PHYSICALITY_TOL:
            raise NonPhysicalCM(f"single-mode CM scale must be >= 1, got {self.cm_scale}")

    @property
    def mean_photons(self) -> float:
        return (self.cm_scale - 1.0) / 2.0 + (self.mean_q**2 + self.mean_p**2) / 4.0


def symplectic_spectrum(cm: TwoModeNormalCM) -> tuple[float, float]:
    """Symplectic eigenvalues ``(nu1, nu2)`` of a normal-form CM.

    ``nu1 = (sqrt(y) + a - b) / 2`` and ``nu2 = (sqrt(y) + b - a) / 2`` with
    ``y = (a + b)^2 - 4 c^2``.

    Raises:
        NonPhysicalCM: if ``y < 4`` or either eigenvalue is below
            ``1 - PHYSICALITY_TOL``.
    """
    y = cm.y
    if y < 4.0 * (1.0 - PHYSICALITY_TOL):
        raise NonPhysicalCM(f"y = (a+b)^2 - 4c^2 = {y} < 4 for {cm}")
    sy = math.sqrt(y)
    nu1 = 0.5 * (sy + cm.a - cm.b)
    nu2 = 0.5 * (sy + cm.b - cm.a)
    if min(nu1, nu2) < 1.0 - PHYSICALITY_TOL:
        raise NonPhysicalCM(f"symplectic spectrum ({nu1}, {nu2}) violates nu >= 1 for {cm}")
    return nu1, nu2


def williamson(cm: TwoModeNormalCM) -> SymplecticDecomposition:
    """Closed-form Williamson decomposition of a normal-form CM.

    The symplectic matrix is ``[[x+ I, x- Z], [x- Z, x+ I]]`` with
    ``x_pm = sqrt((a + b pm sqrt(y)) / (2 sqrt(y)))``.
    """
    nu1, nu2 = symplectic_spectrum(cm)
    sy = math.sqrt(cm.y)
    s = cm.a + cm.b
    x_plus = math.sqrt((s + sy) / (2.0 * sy))
    # s - sqrt(y) = 4c^2 / (s + sqrt(y)); avoids cancellation for small c
    x_minus = math.sqrt(4.0 * cm.c**2 / (s + sy) / (2.0 * sy))
    return SymplecticDecomposition(nu1=nu1, nu2=nu2, x_plus=x_plus, x_minus=x_minus)


def _check_power_args(nu, p):
    if nu < 1.0 - PHYSICALITY_TOL:
        raise DomainError(f"symplectic eigenvalue must be >= 1, got {nu}")
    if not 0.0 < p <= 1.0:
        raise DomainError(f"power must lie in (0, 1], got {p}")


def gp(nu: float, p: float) -> float:
    """Trace of the ``p``-th power of a thermal mode with symplectic eigenvalue ``nu``.

    ``G_p(nu) = 2^p / ((nu + 1)^p - (nu - 1)^p)``; equals 1 for ``nu = 1``.
    """
    _check_power_args(nu, p)
    if abs(nu - 1.0) < PURE_TOL:
        return 1.0
    return 2.0**p / ((nu + 1.0) ** p - (nu - 1.0) ** p)


def lambda_p(nu: float, p: float) -> float:
    """Symplectic eigenvalue of the normalized ``p``-th power of a thermal mode.

    ``Lambda_p(nu) = ((nu + 1)^p + (nu - 1)^p) / ((nu + 1)^p - (nu - 1)^p)``.
    """
    _check_power_args(nu, p)
    if abs(nu - 1.0) < PURE_TOL:
        return 1.0
    hi = (nu + 1.0) ** p
    lo = (nu - 1.0) ** p
    return (hi + lo) / (hi - lo)
