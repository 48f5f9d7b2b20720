from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import InvalidInput, OutOfBall
from core.models import frozen_array


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """Finite Blaschke product with simple zeros and front factor 1."""

    zeros: np.ndarray

    def __post_init__(self):
        zeros = np.ravel(np.array(self.zeros, dtype=complex))
        if zeros.size == 0:
            raise InvalidInput("a Blaschke product needs at least one zero")
        if np.any(np.abs(zeros) >= 1.0):
            raise OutOfBall("Blaschke zeros must lie in the open unit disk")
        for i, j in itertools.combinations(range(zeros.size), 2):
            if zeros[i] == zeros[j]:
                raise InvalidInput(f"zeros {i} and {j} coincide; only simple zeros are supported")
        object.__setattr__(self, 'zeros', frozen_array(zeros))

    @property
    def degree(self) -> int:
        return self.zeros.size


@dataclass
class OrthogonalSearchReport:
    """Tally of a randomized search for r-orthogonal triples in the ball of C^d"""

    trials: int
    d: int
    seed: int
    r_orthogonal: int = 0
    complex_line: int = 0
    unexplained: list[list[list[complex]]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            'trials': self.trials,
            'd': self.d,
            'seed': self.seed,
            'r_orthogonal': self.r_orthogonal,
            'complex_line': self.complex_line,
            'unexplained': self.unexplained,
        }
