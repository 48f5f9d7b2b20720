import logging
from typing import Optional

import numpy as np

from core.exceptions import Infeasible, InternalInconsistency, NotCPP, ValidationFailure
from core.models import GramSpace, Tolerances
from core.services import basepoint_rescale, validate_gram
from hyperbolic.models import PointSet
from hyperbolic.services import triangular_coordinates
from invariants.models import InvariantData
from invariants.services import has_cpp

from .models import Embedding

logger = logging.getLogger(__name__)


class EmbeddingService:
    """Realize complete Pick spaces as point sets in the unit ball"""

    @staticmethod
    def embed_with_certificate(G: GramSpace) -> Embedding:
        """Embed G and report the CPP verdict and the round-trip residual.

        Rescaling at the first kernel turns the problem into factoring
        M[i, j] = 1 - 1/k_ij (i, j >= 1) as the Gram matrix <x_j, x_i> of
        the remaining points, which is done one point at a time in the
        given order.
        """
        tol = G.tol
        certificate = has_cpp(G)
        if not certificate:
            raise NotCPP(
                f"MQ_{certificate.violating_r + 1} has eigenvalue {certificate.violating_eigenvalue:.3e}",
                certificate.as_dict(),
            )

        B = basepoint_rescale(G, 0).K
        if G.n == 1:
            return Embedding(points=PointSet(np.zeros((1, 1))), cpp=True, residual=0.0)

        M = 1.0 - 1.0 / B[1:, 1:]
        try:
            coords, heights = triangular_coordinates(M, tol)
        except NotCPP as e:
            index = e.certificate.get('index', 0) + 1
            raise NotCPP(
                f"no room for point {index + 1}: height radicand {e.certificate.get('margin'):.3e}",
                {**certificate.as_dict(), 'cpp': False, 'index': index + 1, 'margin': e.certificate.get('margin')},
            ) from e

        points = np.vstack([np.zeros((1, coords.shape[1]), dtype=complex), coords])
        rebuilt = 1.0 / (1.0 - points.conj() @ points.T)
        residual = float(np.linalg.norm(rebuilt - B) / (1.0 + np.linalg.norm(B)))
        condition = max(heights) / min(heights) if len(heights) > 1 else 1.0
        logger.debug(
            f"Embedded {G.n} kernels in C^{points.shape[1]}: residual {residual:.3e}, "
            f"condition {condition:.3e}"
        )
        if residual > np.sqrt(tol.tol_eq):
            raise InternalInconsistency(
                f"embedded points reproduce the Gram matrix only to {residual:.3e}",
                residual=residual,
            )
        return Embedding(points=PointSet(points), cpp=True, residual=residual, condition=condition)

    @staticmethod
    def embed(G: GramSpace) -> PointSet:
        """Points in normal form whose Drury-Arveson Gram is a rescaling of G"""
        return EmbeddingService.embed_with_certificate(G).points

    @staticmethod
    def gram_from_invariants(J: InvariantData, tol: Optional[Tolerances] = None) -> GramSpace:
        """The Gram matrix rescaled at the first kernel, rebuilt from the deltas and A_0rs"""
        tol = tol or Tolerances()
        n = J.n
        K = np.ones((n, n), dtype=complex)
        diag = np.ones(n)
        for r in range(1, n):
            diag[r] = 1.0 / (1.0 - J.deltas[(0, r)] ** 2)
            K[r, r] = diag[r]
        for r in range(1, n):
            for s in range(r + 1, n):
                modulus = np.sqrt((1.0 - J.deltas[(r, s)] ** 2) * diag[r] * diag[s])
                # the first row is real, so arg k_rs = A_0rs
                K[r, s] = modulus * np.exp(1j * J.angulars[(0, r, s)])
                K[s, r] = np.conj(K[r, s])
        try:
            return validate_gram(K, tol)
        except ValidationFailure as e:
            raise Infeasible(f"the invariants do not describe a Gram matrix: {e.msg}") from e

    @staticmethod
    def embed_from_invariants(J: InvariantData, tol: Optional[Tolerances] = None) -> PointSet:
        G = EmbeddingService.gram_from_invariants(J, tol)
        certificate = has_cpp(G)
        if not certificate:
            raise Infeasible(
                "the invariants describe a space without the complete Pick property",
                certificate=certificate.as_dict(),
            )
        return EmbeddingService.embed(G)


embed = EmbeddingService.embed
embed_with_certificate = EmbeddingService.embed_with_certificate
gram_from_invariants = EmbeddingService.gram_from_invariants
embed_from_invariants = EmbeddingService.embed_from_invariants
