from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from core.exceptions import InvalidInput
from core.models import frozen_array


@dataclass(frozen=True, eq=False)
class MultiplierSymbol:
    """Values m(x_i) of a multiplier on the points of the space."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ravel(np.array(self.values, dtype=complex))
        if values.size == 0 or not np.all(np.isfinite(values)):
            raise InvalidInput("symbol values must be finite and nonempty")
        object.__setattr__(self, 'values', frozen_array(values))

    @property
    def n(self) -> int:
        return self.values.size

    def __mul__(self, other: MultiplierSymbol) -> MultiplierSymbol:
        return MultiplierSymbol(self.values * other.values)


@dataclass(frozen=True, eq=False)
class HartzData:
    """E[j, k] = m_j(x_k) for j, k >= 1, where m_j is the extremal multiplier
    with m_j(x_0) = 0 and m_j(x_j) = delta_0j. Stored 0-based over the
    indices 1..n-1 of the space, so the matrix is (n-1) x (n-1).
    """

    E: np.ndarray

    def __post_init__(self):
        E = np.array(self.E, dtype=complex)
        if E.ndim != 2 or E.shape[0] != E.shape[1]:
            raise InvalidInput(f"Hartz data must be a square matrix, got shape {E.shape}")
        if not np.all(np.isfinite(E)):
            raise InvalidInput("Hartz data has non-finite entries")
        object.__setattr__(self, 'E', frozen_array(E))

    @property
    def n(self) -> int:
        return self.E.shape[0] + 1


@dataclass(frozen=True)
class NormReport:
    norm: float
    jitter: float = 0.0


@dataclass
class SignPatternReport:
    """Candidate invariant sets consistent with a DeltaData, and which are realizable"""

    bound: int
    tested: int = 0
    feasible: list[dict[tuple[int, int, int], float]] = field(default_factory=list)

    @property
    def feasible_count(self) -> int:
        return len(self.feasible)

    def as_dict(self) -> dict:
        return {'bound': self.bound, 'tested': self.tested, 'feasible': self.feasible_count}
