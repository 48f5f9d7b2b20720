from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.exceptions import InvalidInput, OutOfBall
from core.models import frozen_array

BALL_MARGIN = 1e-12


@dataclass(frozen=True, eq=False)
class PointSet:
    """An ordered finite configuration in the open unit ball of C^d.

    ``points`` has shape (n, d); rows are the points.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise InvalidInput(f"points must form a nonempty (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidInput("points have non-finite coordinates")
        norms = np.linalg.norm(pts, axis=1)
        worst = int(np.argmax(norms))
        if norms[worst] >= 1.0 - BALL_MARGIN:
            raise OutOfBall(f"point {worst} has norm {norms[worst]:.15g}", index=worst)
        object.__setattr__(self, 'points', frozen_array(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, index):
        return self.points[index]

    def padded(self, d: int) -> np.ndarray:
        """Coordinates zero-padded to ambient dimension d"""
        if d < self.d:
            raise InvalidInput(f"cannot pad {self.d} coordinates down to {d}")
        out = np.zeros((self.n, d), dtype=complex)
        out[:, : self.d] = self.points
        return out

    def subset(self, indices) -> PointSet:
        return PointSet(self.points[list(indices)])

    def __repr__(self):
        return f"PointSet(n={self.n}, d={self.d})"


@dataclass(frozen=True, eq=False)
class BallAutomorphism:
    """The map z -> U(phi_a(z)) of the unit ball."""

    a: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        a = np.ravel(np.array(self.a, dtype=complex))
        U = np.array(self.U, dtype=complex)
        if U.shape != (a.size, a.size):
            raise InvalidInput(f"unitary of shape {U.shape} does not act on C^{a.size}")
        if np.linalg.norm(a) >= 1.0:
            raise OutOfBall("involution parameter must lie in the open ball")
        if not np.allclose(U.conj().T @ U, np.eye(a.size), atol=1e-8):
            raise InvalidInput("U is not unitary")
        object.__setattr__(self, 'a', frozen_array(a))
        object.__setattr__(self, 'U', frozen_array(U))

    @property
    def d(self) -> int:
        return self.a.size

    def __call__(self, z) -> np.ndarray:
        from .services import phi

        return self.U @ phi(self.a, z)


@dataclass(frozen=True)
class NormalForm:
    """A configuration in normal form with the automorphism producing it.

    ``condition`` is the ratio of largest to smallest pivot height of the
    triangular factorization (1.0 when there is at most one pivot).
    """

    points: PointSet
    automorphism: BallAutomorphism
    condition: float

    def __iter__(self):
        yield self.points
        yield self.automorphism
