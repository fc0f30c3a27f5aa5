"""Conditional outputs of a beam-splitter memory cell with a thermal bath."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from .errors import DomainError
from .gaussian import SingleModeGaussian, TwoModeNormalCM


class Bit(IntEnum):
    """Value stored in a cell: a pit (low reflectivity) or a land."""

    PIT = 0
    LAND = 1


def as_bit(bit) -> Bit:
    try:
        return Bit(bit)
    except ValueError:
        raise DomainError(f"bit must be 0 or 1, got {bit!r}") from None


@dataclass(frozen=True)
class MemoryModel:
    """Cell reflectivities ``r0 <= r1`` and bath occupation ``nb``."""

    r0: float
    r1: float
    nb: float = 0.0

    def __post_init__(self):
        for name in ("r0", "r1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v}")
        if self.r1 < self.r0:
            raise DomainError(f"expected r1 >= r0, got r0={self.r0}, r1={self.r1}")
        if self.nb < 0:
            raise DomainError(f"nb must be >= 0, got {self.nb}")

    @property
    def ideal(self) -> bool:
        return self.r1 == 1.0

    def reflectivity(self, bit) -> float:
        return self.r1 if as_bit(bit) is Bit.LAND else self.r0


@dataclass(frozen=True)
class SignalProfile:
    """``m`` signal modes, each carrying ``ns`` mean photons."""

    m: int
    ns: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not self.ns > 0:
            raise DomainError(f"ns must be > 0, got {self.ns}")


def tmsv_cm(ns: float) -> TwoModeNormalCM:
    """CM of a two-mode squeezed vacuum with ``ns`` photons per mode."""
    if not ns > 0:
        raise DomainError(f"ns must be > 0, got {ns}")
    mu = 2.0 * ns + 1.0
    return TwoModeNormalCM(mu, mu, 2.0 * math.sqrt(ns * (ns + 1.0)))


def output_cm(mem: MemoryModel, bit, ns: float) -> TwoModeNormalCM:
    """Reflected+idler CM after one TMSV pair probes the cell.

    ``a = r mu + (1 - r) beta``, ``b = mu``, ``c = sqrt(r (mu^2 - 1))`` with
    ``mu = 2 ns + 1`` and ``beta = 2 nb + 1``.
    """
    if not ns > 0:
        raise DomainError(f"ns must be > 0, got {ns}")
    r = mem.reflectivity(bit)
    if r == 1.0:
        return tmsv_cm(ns)
    mu = 2.0 * ns + 1.0
    beta = 2.0 * mem.nb + 1.0
    # mu^2 - 1 = 4 ns (ns + 1), written without cancellation
    return TwoModeNormalCM(r * mu + (1.0 - r) * beta, mu, math.sqrt(r * 4.0 * ns * (ns + 1.0)))


def coherent_output(mem: MemoryModel, bit, ns: float) -> SingleModeGaussian:
    """Output of the coherent probe ``|sqrt(ns)>`` (real amplitude)."""
    if ns < 0:
        raise DomainError(f"ns must be >= 0, got {ns}")
    r = mem.reflectivity(bit)
    return SingleModeGaussian(
        mean_q=2.0 * math.sqrt(r * ns),
        mean_p=0.0,
        cm_scale=1.0 + 2.0 * (1.0 - r) * mem.nb,
    )
