import itertools
import logging
from typing import Optional

import numpy as np
from scipy import linalg

from core.exceptions import NotCPP, OutOfBall, Reducible, SizeMismatch
from core.linalg import matrices_close
from core.models import GramSpace, Tolerances
from core.services import validate_gram

from .models import BallAutomorphism, NormalForm, PointSet

logger = logging.getLogger(__name__)


def inner(z, w) -> complex:
    """<z, w>, linear in z and conjugate linear in w"""
    return complex(np.vdot(np.asarray(w, dtype=complex), np.asarray(z, dtype=complex)))


def _in_ball(*points):
    for p in points:
        if np.linalg.norm(p) >= 1.0:
            raise OutOfBall(f"point with norm {np.linalg.norm(p):.15g} is outside the open ball")


def phi(a, z) -> np.ndarray:
    """The ball involution exchanging 0 and a (the identity when a = 0)"""
    a = np.ravel(np.asarray(a, dtype=complex))
    z = np.ravel(np.asarray(z, dtype=complex))
    aa = inner(a, a).real
    if aa == 0.0:
        return z.copy()
    za = inner(z, a)
    projection = (za / aa) * a
    s = np.sqrt(1.0 - aa)
    return (a - projection - s * (z - projection)) / (1.0 - za)


class BallService:
    """The unit ball model: metric, automorphisms and Drury-Arveson Gram matrices"""

    @staticmethod
    def kernel_value(z, w) -> complex:
        """k_z(w) = 1 / (1 - <w, z>)"""
        return 1.0 / (1.0 - inner(w, z))

    @staticmethod
    def rho(z, w) -> float:
        """Pseudohyperbolic distance |phi_z(w)|"""
        z = np.ravel(np.asarray(z, dtype=complex))
        w = np.ravel(np.asarray(w, dtype=complex))
        _in_ball(z, w)
        zz, ww = inner(z, z).real, inner(w, w).real
        value = 1.0 - (1.0 - zz) * (1.0 - ww) / abs(1.0 - inner(w, z)) ** 2
        return float(np.sqrt(min(max(value, 0.0), 1.0)))

    @staticmethod
    def beta(z, w) -> float:
        """Hyperbolic distance arctanh(rho)"""
        return float(np.arctanh(BallService.rho(z, w)))

    @staticmethod
    def involution(a) -> BallAutomorphism:
        a = np.ravel(np.asarray(a, dtype=complex))
        _in_ball(a)
        return BallAutomorphism(a=a, U=np.eye(a.size, dtype=complex))

    @staticmethod
    def apply(automorphism: BallAutomorphism, X: PointSet) -> PointSet:
        pts = X.padded(automorphism.d) if X.d < automorphism.d else X.points
        if pts.shape[1] != automorphism.d:
            raise SizeMismatch(f"automorphism of C^{automorphism.d} applied to points in C^{X.d}")
        return PointSet(np.array([automorphism(p) for p in pts]))

    @staticmethod
    def compose(outer: BallAutomorphism, inner_map: BallAutomorphism):
        return lambda z: outer(inner_map(z))

    @staticmethod
    def ru1_defect(a, z) -> float:
        a, z = np.ravel(np.asarray(a, dtype=complex)), np.ravel(np.asarray(z, dtype=complex))
        lhs = inner(phi(a, z), phi(a, z)).real
        rhs = 1.0 - (1.0 - inner(a, a).real) * (1.0 - inner(z, z).real) / abs(1.0 - inner(z, a)) ** 2
        return abs(lhs - rhs)

    @staticmethod
    def ru2_defect(a, z, w) -> float:
        pa, pw = phi(a, z), phi(a, w)
        lhs = 1.0 / (1.0 - inner(pw, pa))
        rhs = (
            (1.0 - inner(w, a))
            * (1.0 - inner(a, z))
            / (1.0 - inner(a, a).real)
            / (1.0 - inner(w, z))
        )
        return abs(lhs - rhs)

    @staticmethod
    def ru3_defect(a, z, w) -> float:
        k = BallService.kernel_value
        rhs = k(z, a) * np.conj(k(w, a)) / k(a, a).real * k(phi(a, z), phi(a, w))
        return abs(k(z, w) - rhs)

    @staticmethod
    def gram_from_points(X: PointSet, tol: Optional[Tolerances] = None) -> GramSpace:
        """k_ij = 1 / (1 - <x_j, x_i>)"""
        tol = tol or Tolerances()
        Z = X.points
        for i, j in itertools.combinations(range(X.n), 2):
            if BallService.rho(Z[i], Z[j]) ** 2 <= tol.tol_zero:
                raise Reducible(f"points {i} and {j} coincide", pair=(i, j))
        K = 1.0 / (1.0 - Z.conj() @ Z.T)
        return validate_gram(K, tol)

    @staticmethod
    def triangular_coordinates(M, tol: Tolerances, clamp: Optional[float] = None):
        """Factor a Gram matrix of vectors as M[i, j] = <x_j, x_i> in order.

        Each row either lies in the span of the earlier pivot rows or opens a
        new coordinate whose entry is the positive square root of the
        residual. Residuals in [-clamp, tol_rank * scale] are treated as zero;
        anything below -clamp raises NotCPP carrying the failing margin.
        Returns (coordinates, pivot heights).
        """
        M = np.asarray(M, dtype=complex)
        m = M.shape[0]
        scale = max(1.0, float(np.max(np.abs(M.diagonal())))) if m else 1.0
        clamp = tol.tol_eq * scale if clamp is None else clamp
        Y = np.zeros((m, max(m, 1)), dtype=complex)
        pivots: list[int] = []
        heights: list[float] = []

        for i in range(m):
            width = len(pivots)
            if width:
                P = Y[np.ix_(pivots, range(width))]
                b = M[i, pivots]
                Y[i, :width] = linalg.solve_triangular(P.conj(), b, lower=True)
            radicand = M[i, i].real - float(np.sum(np.abs(Y[i, :width]) ** 2))
            if radicand > tol.tol_rank * scale:
                Y[i, width] = np.sqrt(radicand)
                pivots.append(i)
                heights.append(float(np.sqrt(radicand)))
            elif radicand < -clamp:
                raise NotCPP(
                    f"negative height radicand {radicand:.3e} at position {i}",
                    {'cpp': False, 'index': i, 'margin': radicand},
                )
            elif radicand < 0:
                logger.warning(f"Clamping height radicand {radicand:.3e} at position {i} to zero")

        width = max(1, len(pivots))
        coords = Y[:, :width].conj()
        return coords, heights

    @staticmethod
    def normal_form(X: PointSet, tol: Optional[Tolerances] = None) -> NormalForm:
        """Move x_0 to the origin and put the rest in triangular position"""
        tol = tol or Tolerances()
        move = BallService.involution(X.points[0])
        Y0 = BallService.apply(move, X).points

        M = Y0[1:].conj() @ Y0[1:].T
        coords, heights = BallService.triangular_coordinates(M, tol)
        points = np.vstack([np.zeros((1, coords.shape[1]), dtype=complex), coords])
        condition = max(heights) / min(heights) if len(heights) > 1 else 1.0

        # unitary carrying phi_{x_0}(X) onto the normal form (orthogonal Procrustes)
        target = np.zeros_like(Y0)
        width = min(points.shape[1], Y0.shape[1])
        target[:, :width] = points[:, :width]
        W, _, Vh = linalg.svd(Y0.conj().T @ target)
        U = (W @ Vh).T

        automorphism = BallAutomorphism(a=X.points[0], U=U)
        logger.debug(f"Normal form of {X.n} points in C^{points.shape[1]}, condition {condition:.3e}")
        return NormalForm(points=PointSet(points), automorphism=automorphism, condition=condition)

    @staticmethod
    def congruent(X: PointSet, Y: PointSet, tol: Optional[Tolerances] = None) -> bool:
        if X.n != Y.n:
            raise SizeMismatch(f"configurations of sizes {X.n} and {Y.n}")
        tol = tol or Tolerances()
        NX = BallService.normal_form(X, tol).points
        NY = BallService.normal_form(Y, tol).points
        d = max(NX.d, NY.d)
        return bool(matrices_close(NX.padded(d), NY.padded(d), tol.tol_eq))


kernel_value = BallService.kernel_value
rho = BallService.rho
beta = BallService.beta
involution = BallService.involution
apply = BallService.apply
compose = BallService.compose
ru1_defect = BallService.ru1_defect
ru2_defect = BallService.ru2_defect
ru3_defect = BallService.ru3_defect
gram_from_points = BallService.gram_from_points
triangular_coordinates = BallService.triangular_coordinates
normal_form = BallService.normal_form
congruent = BallService.congruent
