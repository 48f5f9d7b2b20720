from __future__ import annotations

from dataclasses import dataclass

from hyperbolic.models import PointSet


@dataclass(frozen=True)
class Embedding:
    """Points realizing a Gram matrix, with the checks that certify them.

    ``residual`` is the relative Frobenius distance between the basepoint
    rescalings of the input Gram and of the points' Drury-Arveson Gram.
    """

    points: PointSet
    cpp: bool
    residual: float
    condition: float = 1.0

    def certificate(self) -> dict:
        return {'cpp': self.cpp, 'residual': self.residual, 'condition': self.condition}
