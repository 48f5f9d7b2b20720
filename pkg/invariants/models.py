from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class InvariantData:
    """The parameter set J(X): every delta_ij and every A_0rs with 0 < r < s.

    Keys are 0-based index tuples; angular values lie in (-pi, pi].
    """

    n: int
    deltas: dict[tuple[int, int], float]
    angulars: dict[tuple[int, int, int], float]

    @property
    def count(self) -> int:
        return len(self.deltas) + len(self.angulars)


@dataclass(frozen=True, eq=False)
class MQMatrix:
    """The matrix (1 - k_ir k_rj / (k_ij k_rr)) over i, j != r."""

    r: int
    M: np.ndarray
    indices: tuple[int, ...]


@dataclass
class CPPCertificate:
    """Outcome of the MQ positivity test; truthy when the space has the CPP."""

    has_cpp: bool
    min_eigenvalues: dict[int, float] = field(default_factory=dict)
    violating_r: Optional[int] = None
    violating_eigenvalue: Optional[float] = None

    def __bool__(self):
        return self.has_cpp

    def as_dict(self) -> dict:
        return {
            'cpp': self.has_cpp,
            'mq_min_eigenvalues': {str(r + 1): v for r, v in self.min_eigenvalues.items()},
            'violating_r': None if self.violating_r is None else self.violating_r + 1,
            'violating_eigenvalue': self.violating_eigenvalue,
        }


@dataclass(frozen=True)
class DeltaData:
    """The invariant set built from all delta_ij and all Delta(0; j, k)."""

    n: int
    deltas: dict[tuple[int, int], float]
    capital_deltas: dict[tuple[int, int, int], float]
