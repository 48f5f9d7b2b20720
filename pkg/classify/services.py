import itertools
import logging
from typing import Optional

import numpy as np
from scipy import linalg

from core.exceptions import DegenerateTriple, HypothesisFailed, Reducible, WrongDimension
from core.models import GramSpace, Tolerances
from core.services import basepoint_rescale
from hyperbolic.models import PointSet
from hyperbolic.services import gram_from_points, normal_form
from invariants.services import angular_invariant, delta, has_cpp, lf, mq_matrix

from .models import ConfigClass, ConfigSurvey, ConfigTag

logger = logging.getLogger(__name__)


def _triple_gram(X: PointSet, tol: Tolerances) -> GramSpace:
    if X.n != 3:
        raise WrongDimension(f"expected 3 points, got {X.n}")
    try:
        return gram_from_points(X, tol)
    except Reducible as e:
        raise DegenerateTriple(f"points {e.pair[0] + 1} and {e.pair[1] + 1} coincide") from e


def _mobius(v: complex, z: complex) -> complex:
    """The disk involution exchanging 0 and v"""
    return (v - z) / (1.0 - np.conj(v) * z)


class ClassificationService:
    """Geometric classes of configurations in the ball"""

    @staticmethod
    def classify_triple(X: PointSet, tol: Optional[Tolerances] = None) -> ConfigClass:
        tol = tol or Tolerances()
        G = _triple_gram(X, tol)
        B = basepoint_rescale(G, 0).K

        witnesses = {
            'angular': abs(angular_invariant(G, 0, 1, 2)),
            'footprint': abs(lf(G, 0, 1, 2) - delta(G, 0, 2)),
            'right_angle_first': float(abs(B[1, 2] - 1.0)),
            'right_angle_second': float(abs(B[1, 1] - B[1, 2]) / abs(B[1, 1])),
        }
        real = witnesses['angular'] <= tol.tol_class
        complex_line = witnesses['footprint'] <= tol.tol_class

        if real and complex_line:
            tag = ConfigTag.GEODESIC
        elif complex_line:
            tag = ConfigTag.COMPLEX_GEODESIC
        elif real and witnesses['right_angle_first'] <= tol.tol_class:
            tag = ConfigTag.RIGHT_ANGLE_AT_FIRST
        elif real and witnesses['right_angle_second'] <= tol.tol_class:
            tag = ConfigTag.RIGHT_ANGLE_AT_SECOND
        elif real:
            tag = ConfigTag.REAL_GEODESIC_DISK
        else:
            tag = ConfigTag.GENERIC
        logger.debug(f"Triple classified as {tag.value}: {witnesses}")
        return ConfigClass(tag=tag, witnesses=witnesses)

    @staticmethod
    def classify_points(X: PointSet, tol: Optional[Tolerances] = None) -> ConfigSurvey:
        classes = {
            triple: ClassificationService.classify_triple(X.subset(triple), tol)
            for triple in itertools.combinations(range(X.n), 3)
        }
        return ConfigSurvey(classes=classes)

    @staticmethod
    def lies_in_geodesic(X: PointSet, tol: Optional[Tolerances] = None) -> bool:
        tol = tol or Tolerances()
        if X.n < 3:
            return True
        G = gram_from_points(X, tol)
        for i, j, k in itertools.combinations(range(X.n), 3):
            if abs(angular_invariant(G, i, j, k)) > tol.tol_class:
                return False
            if abs(lf(G, i, j, k) - delta(G, i, k)) > tol.tol_class:
                return False
        return True

    @staticmethod
    def lies_in_totally_real(X: PointSet, tol: Optional[Tolerances] = None) -> bool:
        tol = tol or Tolerances()
        if X.n < 3:
            return True
        G = gram_from_points(X, tol)
        return all(
            abs(angular_invariant(G, i, j, k)) <= tol.tol_class
            for i, j, k in itertools.combinations(range(X.n), 3)
        )

    @staticmethod
    def lies_in_real_disk(X: PointSet, tol: Optional[Tolerances] = None) -> bool:
        """Totally real, and every 4-subset through x_0 has a singular MQ_0"""
        tol = tol or Tolerances()
        if not ClassificationService.lies_in_totally_real(X, tol):
            return False
        if X.n < 4:
            return True
        G = gram_from_points(X, tol)
        for j, k, l in itertools.combinations(range(1, X.n), 3):
            idx = [0, j, k, l]
            sub = GramSpace(K=G.K[np.ix_(idx, idx)], tol=tol)
            det = linalg.det(mq_matrix(sub, 0).M)
            if abs(det) > tol.tol_rank:
                logger.debug(f"det MQ_1 on {(1, j + 1, k + 1, l + 1)} is {abs(det):.3e}")
                return False
        return True

    @staticmethod
    def is_r_pick(G: GramSpace) -> bool:
        """LF_ijk = delta_ik on every increasing triple, for spaces whose 4-point subspaces have the CPP"""
        tol = G.tol
        size = min(4, G.n)
        for subset in itertools.combinations(range(G.n), size):
            idx = list(subset)
            sub = GramSpace(K=G.K[np.ix_(idx, idx)], tol=tol)
            if not has_cpp(sub):
                raise HypothesisFailed(
                    f"the subspace on kernels {[i + 1 for i in idx]} lacks the complete Pick property"
                )
        return all(
            abs(lf(G, i, j, k) - delta(G, i, k)) <= tol.tol_class
            for i, j, k in itertools.combinations(range(G.n), 3)
        )

    @staticmethod
    def projected_area(X: PointSet, tol: Optional[Tolerances] = None) -> float:
        """Hyperbolic area of the triangle projected onto the complex geodesic through x_0, x_1"""
        tol = tol or Tolerances()
        _triple_gram(X, tol)
        points = normal_form(X, tol).points.padded(2)
        vertices = [complex(p[0]) for p in points]

        total = 0.0
        for v in range(3):
            p, q = (vertices[u] for u in range(3) if u != v)
            a, b = _mobius(vertices[v], p), _mobius(vertices[v], q)
            if abs(a) <= tol.tol_zero or abs(b) <= tol.tol_zero:
                # two projected vertices coincide
                return 0.0
            total += abs(np.angle(b / a))
        return float(max(np.pi - total, 0.0) / 2.0)


classify_triple = ClassificationService.classify_triple
classify_points = ClassificationService.classify_points
lies_in_geodesic = ClassificationService.lies_in_geodesic
lies_in_totally_real = ClassificationService.lies_in_totally_real
lies_in_real_disk = ClassificationService.lies_in_real_disk
is_r_pick = ClassificationService.is_r_pick
projected_area = ClassificationService.projected_area
