"""Bounds and information gain for reading a binary optical memory.

Quadrature convention used throughout: ``[x_k, x_l] = 2 i Omega``, the vacuum
covariance matrix is the identity, a thermal mode with ``n`` mean photons has
covariance ``(2 n + 1) I`` and a coherent amplitude ``alpha`` has mean
``(2 Re alpha, 2 Im alpha)``.
"""
from importlib.metadata import PackageNotFoundError, version

from .bounds import (
    BoundPair,
    QuantumBound,
    bound_pair,
    chernoff_infimum,
    chernoff_qs,
    classical_bound,
    coherent_fidelity,
    gaussian_chernoff,
    ideal_chernoff_term,
    ideal_fidelity,
    quantum_bound,
)
from .channel import Bit, MemoryModel, SignalProfile, coherent_output, output_cm, tmsv_cm
from .critical import (
    CriticalCurve,
    CriticalPoint,
    asymptote_high_energy,
    asymptote_r0_to_1,
    critical_curve,
    critical_m,
    critical_m_worst_case,
    kappa,
    worst_bath,
)
from .errors import (
    DomainError,
    NoAdvantage,
    NonPhysicalCM,
    NumericalError,
    OptimizationError,
    TruncationError,
)
from .gaussian import (
    SingleModeGaussian,
    SymplecticDecomposition,
    TwoModeNormalCM,
    gp,
    lambda_p,
    symplectic_spectrum,
    williamson,
)
from .reading import GainReport, binary_entropy, gain

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"
