import logging
from typing import Optional

import numpy as np
from scipy import linalg

from core.exceptions import InternalInconsistency, InvalidInput, ValidationFailure, WrongDimension
from core.models import GramSpace, RescalingMap, Tolerances
from core.services import basepoint_rescale, rescale
from hyperbolic.models import PointSet
from hyperbolic.services import apply, gram_from_points, involution
from invariants.services import delta, lf

from .models import BlaschkeProduct, OrthogonalSearchReport

logger = logging.getLogger(__name__)


def _factor(a: complex, z: complex) -> complex:
    return (z - a) / (1.0 - np.conj(a) * z)


class DualityService:
    """Orthogonal Gram matrices and the Blaschke rescaling of disk spaces"""

    @staticmethod
    def orthogonality_residuals(G: GramSpace) -> dict[str, float]:
        """Frobenius residuals of K^t K = I, K K^t = I, Theta K Theta^* = K^t and Theta^t Theta = I"""
        K = G.K
        eye = np.eye(G.n)
        theta = linalg.inv(K)
        return {
            'transpose_left': float(np.linalg.norm(K.T @ K - eye)),
            'transpose_right': float(np.linalg.norm(K @ K.T - eye)),
            'inverse_conjugation': float(np.linalg.norm(theta @ K @ theta.conj().T - K.T)),
            'inverse_transpose': float(np.linalg.norm(theta.T @ theta - eye)),
        }

    @staticmethod
    def is_orthogonal(G: GramSpace) -> bool:
        """K^t K = I, cross-checked against K K^t = I"""
        threshold = G.tol.tol_eq * G.n
        K = G.K
        left = float(np.linalg.norm(K.T @ K - np.eye(G.n)))
        right = float(np.linalg.norm(K @ K.T - np.eye(G.n)))
        verdict = left <= threshold
        if verdict != (right <= threshold):
            if min(left, right) <= threshold / 10 and max(left, right) > threshold * 10:
                raise InternalInconsistency(
                    "K^t K and K K^t disagree on orthogonality", left=left, right=right
                )
            logger.debug(f"Orthogonality residuals straddle the threshold: {left:.3e}, {right:.3e}")
        return verdict

    @staticmethod
    def blaschke_value(B: BlaschkeProduct, z: complex) -> complex:
        return complex(np.prod([_factor(a, z) for a in B.zeros]))

    @staticmethod
    def blaschke_derivative(B: BlaschkeProduct, i: int) -> complex:
        """Theta'(x_i): the vanishing factor contributes 1/(1 - |x_i|^2)"""
        x = B.zeros[i]
        others = [_factor(a, x) for s, a in enumerate(B.zeros) if s != i]
        return complex(np.prod(others) / (1.0 - abs(x) ** 2))

    @staticmethod
    def orthogonal_rescaling(
        X: PointSet, tol: Optional[Tolerances] = None
    ) -> tuple[GramSpace, RescalingMap]:
        """Rescale the Szego Gram matrix at disk points by conj(Theta'(x_i)^(-1/2))"""
        if X.d != 1:
            raise WrongDimension(f"orthogonal rescaling needs points in the disk, got C^{X.d}")
        G = gram_from_points(X, tol)
        B = BlaschkeProduct(X.points[:, 0])
        derivatives = np.array([DualityService.blaschke_derivative(B, i) for i in range(X.n)])
        gamma = np.conj(1.0 / np.sqrt(derivatives))
        R = RescalingMap(gamma)
        rescaled = rescale(G, R)
        logger.debug(
            f"Orthogonal rescaling of {X.n} disk points: "
            f"residual {DualityService.orthogonality_residuals(rescaled)['transpose_left']:.3e}"
        )
        return rescaled, R

    @staticmethod
    def r_orthogonal_determinant(G: GramSpace) -> float:
        """det [[1, k_22, k_23], [1, k_32, k_33], [1, k_22 k_32, k_23 k_33]] after rescaling at the first kernel

        The determinant is real and expands to
        |k_23|^2 (k_22 + k_33 - 1) + k_22 k_33 - 2 k_22 k_33 Re k_23.
        """
        if G.n != 3:
            raise WrongDimension(f"expected a 3-point space, got {G.n}")
        K = basepoint_rescale(G, 0).K
        k22, k23, k32, k33 = K[1, 1], K[1, 2], K[2, 1], K[2, 2]
        M = np.array([[1.0, k22, k23], [1.0, k32, k33], [1.0, k22 * k32, k23 * k33]])
        return float(np.linalg.det(M).real)

    @staticmethod
    def is_r_orthogonal_3d(G: GramSpace) -> bool:
        """Three point spaces: r-orthogonal exactly when the points lie in one complex geodesic.

        After rescaling at the first kernel the test is the vanishing of
        (1 - 1/k_22)(1 - 1/k_33) - |1 - 1/k_23|^2. This residual is
        r_orthogonal_determinant divided by -|k_23|^2 k_22 k_33, so it vanishes
        exactly with the determinant while staying scale free. It is
        cross-checked against LF_123 = delta_13.
        """
        if G.n != 3:
            raise WrongDimension(f"expected a 3-point space, got {G.n}")
        tol = G.tol
        K = basepoint_rescale(G, 0).K
        cubic = (1.0 - 1.0 / K[1, 1].real) * (1.0 - 1.0 / K[2, 2].real) - abs(1.0 - 1.0 / K[1, 2]) ** 2
        verdict = abs(cubic) <= tol.tol_eq

        footprint = abs(lf(G, 0, 1, 2) - delta(G, 0, 2))
        if verdict != (footprint <= tol.tol_class):
            band = np.sqrt(tol.tol_class)
            if (verdict and footprint > band) or (not verdict and abs(cubic) > band):
                raise InternalInconsistency(
                    "determinant and footprint tests disagree", determinant=cubic, footprint=footprint
                )
            logger.debug(f"r-orthogonality tests straddle the boundary: {cubic:.3e}, {footprint:.3e}")
        return verdict

    @staticmethod
    def search_r_orthogonal(
        trials: int, d: int = 2, seed: int = 0, tol: Optional[Tolerances] = None
    ) -> OrthogonalSearchReport:
        """Sample random triples of the ball and record r-orthogonal ones that leave every complex line"""
        tol = tol or Tolerances()
        if trials < 1 or d < 1:
            raise InvalidInput(f"need trials >= 1 and d >= 1, got {trials} and {d}")
        rng = np.random.default_rng(seed)
        report = OrthogonalSearchReport(trials=trials, d=d, seed=seed)
        for _ in range(trials):
            directions = rng.standard_normal((3, d)) + 1j * rng.standard_normal((3, d))
            radii = 0.9 * rng.uniform(size=3) ** (1.0 / (2 * d))
            X = PointSet(directions / np.linalg.norm(directions, axis=1)[:, None] * radii[:, None])
            try:
                verdict = DualityService.is_r_orthogonal_3d(gram_from_points(X, tol))
            except ValidationFailure as e:
                logger.debug(f"Skipping sampled triple: {e}")
                continue
            if not verdict:
                continue
            report.r_orthogonal += 1
            moved = apply(involution(X.points[0]), X).points[1:]
            if np.linalg.matrix_rank(moved, tol=tol.tol_rank) <= 1:
                report.complex_line += 1
            else:
                report.unexplained.append(X.points.tolist())
        if report.unexplained:
            logger.warning(f"{len(report.unexplained)} r-orthogonal triples lie outside a complex line")
        return report


orthogonality_residuals = DualityService.orthogonality_residuals
is_orthogonal = DualityService.is_orthogonal
blaschke_value = DualityService.blaschke_value
blaschke_derivative = DualityService.blaschke_derivative
orthogonal_rescaling = DualityService.orthogonal_rescaling
r_orthogonal_determinant = DualityService.r_orthogonal_determinant
is_r_orthogonal_3d = DualityService.is_r_orthogonal_3d
search_r_orthogonal = DualityService.search_r_orthogonal
