import itertools
import logging
from typing import Optional

import numpy as np
from scipy import linalg

from .exceptions import (
    DimensionMismatch,
    IllConditioned,
    InvalidInput,
    NotHermitian,
    NotPositiveDefinite,
    Reducible,
)
from .linalg import ensure_square, extreme_eigenvalues, hermitian_part, matrices_close
from .models import GramSpace, RescalingMap, Tolerances, ValidationReport

logger = logging.getLogger(__name__)

DEFAULT_PERMUTATION_LIMIT = 8


class GramService:
    """Validation and the rescaling calculus of Gram matrices"""

    @staticmethod
    def gram_report(K, tol: Optional[Tolerances] = None) -> ValidationReport:
        """Check every GramSpace invariant and list the ones that fail"""
        tol = tol or Tolerances()
        K = np.asarray(K, dtype=complex)
        report = ValidationReport()

        if not ensure_square(K):
            raise DimensionMismatch(f"Gram matrix must be square and nonempty, got {K.shape}")
        if not np.all(np.isfinite(K)):
            raise InvalidInput("Gram matrix has non-finite entries")

        if not matrices_close(K, K.conj().T, tol.tol_eq):
            report.hermitian = False
            report.failures.append('hermitian')

        lo, hi = extreme_eigenvalues(K)
        report.min_eigenvalue, report.max_eigenvalue = lo, hi
        if not (hi > 0 and lo > tol.tol_psd * hi):
            report.positive_definite = False
            report.failures.append('positive_definite')
            return report

        n = K.shape[0]
        d = K.diagonal().real
        for i, j in itertools.combinations(range(n), 2):
            scale = np.sqrt(d[i] * d[j])
            modulus = abs(K[i, j])
            # orthogonal kernels, or kernels spanning the same line
            if modulus <= tol.tol_zero * scale or 1.0 - (modulus / scale) ** 2 <= tol.tol_zero:
                report.irreducible = False
                report.reducible_pair = (i, j)
                report.failures.append('irreducible')
                break
        return report

    @staticmethod
    def validate_gram(
        K,
        tol: Optional[Tolerances] = None,
        labels=None,
        provenance: str = '',
        allow_reducible: bool = False,
    ) -> GramSpace:
        """Return a GramSpace for K or raise for the first failed invariant"""
        tol = tol or Tolerances()
        report = GramService.gram_report(K, tol)
        if not report.hermitian:
            raise NotHermitian("Gram matrix is not Hermitian", report=report)
        if not report.positive_definite:
            raise NotPositiveDefinite(
                f"Gram matrix is not positive definite "
                f"(lambda_min={report.min_eigenvalue:.3e}, lambda_max={report.max_eigenvalue:.3e})",
                report=report,
            )
        if not report.irreducible:
            i, j = report.reducible_pair
            if not allow_reducible:
                raise Reducible(f"kernels {i} and {j} violate irreducibility", pair=(i, j), report=report)
            logger.warning(f"Accepting reducible space: kernels {i} and {j}")

        K = hermitian_part(K)
        return GramSpace(
            K=K,
            labels=labels,
            tol=tol,
            provenance=provenance,
            reducible_pair=report.reducible_pair,
        )

    @staticmethod
    def normalized_entries(G: GramSpace) -> np.ndarray:
        """k_ij / sqrt(k_ii k_jj)"""
        s = 1.0 / np.sqrt(G.diagonal)
        return s[:, None] * G.K * s[None, :]

    @staticmethod
    def rescale(G: GramSpace, R: RescalingMap) -> GramSpace:
        """Apply gamma_i k_{p(i)p(j)} conj(gamma_j)"""
        if R.n != G.n:
            raise DimensionMismatch(f"rescaling of length {R.n} applied to a {G.n}-point space")
        perm = list(R.perm) if R.perm is not None else list(range(G.n))
        K = G.K[np.ix_(perm, perm)]
        g = R.gamma
        labels = tuple(G.labels[p] for p in perm) if G.labels else None
        return GramService.validate_gram(g[:, None] * K * g.conj()[None, :], G.tol, labels=labels)

    @staticmethod
    def basepoint_gamma(G: GramSpace, b: int = 0) -> np.ndarray:
        if not 0 <= b < G.n:
            raise InvalidInput(f"basepoint {b} outside 0..{G.n - 1}")
        root = np.sqrt(G.K[b, b].real)
        gamma = root / G.K[:, b]
        gamma[b] = 1.0 / root
        return gamma

    @staticmethod
    def basepoint_rescale(G: GramSpace, b: int = 0) -> GramSpace:
        """Rescale so that row and column b are all ones"""
        gamma = GramService.basepoint_gamma(G, b)
        K = gamma[:, None] * G.K * gamma.conj()[None, :]
        K[b, :] = 1.0
        K[:, b] = 1.0
        np.fill_diagonal(K, K.diagonal().real)
        return GramSpace(K=K, labels=G.labels, tol=G.tol, reducible_pair=G.reducible_pair)

    @staticmethod
    def normalized_rescale(G: GramSpace) -> GramSpace:
        """Unit diagonal with a real nonnegative first row"""
        phases = np.exp(1j * np.angle(G.K[0, :]))
        gamma = phases / np.sqrt(G.diagonal)
        K = gamma[:, None] * G.K * gamma.conj()[None, :]
        np.fill_diagonal(K, 1.0)
        K[0, :] = np.abs(K[0, :])
        K[:, 0] = K[0, :]
        return GramSpace(K=K, labels=G.labels, tol=G.tol, reducible_pair=G.reducible_pair)

    @staticmethod
    def rescaling_equivalent(
        G1: GramSpace,
        G2: GramSpace,
        tol: Optional[Tolerances] = None,
        search_permutations: bool = True,
        permutation_limit: int = DEFAULT_PERMUTATION_LIMIT,
    ) -> bool:
        """Compare basepoint rescalings over all relabelings of G2 unless search_permutations is off"""
        if G1.n != G2.n:
            raise DimensionMismatch(f"cannot compare spaces of sizes {G1.n} and {G2.n}")
        tol = tol or G1.tol
        target = GramService.basepoint_rescale(G1, 0).K

        if not search_permutations:
            return bool(matrices_close(target, GramService.basepoint_rescale(G2, 0).K, tol.tol_eq))

        if G2.n > permutation_limit:
            logger.warning(
                f"Relabeling search skipped for n={G2.n} > {permutation_limit}; "
                "comparing under the given labels"
            )
            return bool(matrices_close(target, GramService.basepoint_rescale(G2, 0).K, tol.tol_eq))

        for perm in itertools.permutations(range(G2.n)):
            K = G2.K[np.ix_(perm, perm)]
            candidate = GramService.basepoint_rescale(GramSpace(K=K, tol=G2.tol), 0).K
            if matrices_close(target, candidate, tol.tol_eq):
                logger.debug(f"Spaces match under relabeling {perm}")
                return True
        return False

    @staticmethod
    def conjugate_space(G: GramSpace) -> GramSpace:
        """The space of conjugate functions; its Gram matrix is the transpose"""
        return GramSpace(
            K=G.K.T,
            labels=G.labels,
            tol=G.tol,
            provenance=G.provenance,
            reducible_pair=G.reducible_pair,
        )

    @staticmethod
    def dualized_space(G: GramSpace) -> GramSpace:
        """The space whose Gram matrix is K^-1 (the dual basis)"""
        cond = np.linalg.cond(G.K)
        if cond > 1.0 / G.tol.tol_rank:
            raise IllConditioned(f"condition number {cond:.3e} too large to invert", condition=cond)
        inverse = linalg.inv(G.K)
        return GramService.validate_gram(inverse, G.tol, labels=G.labels, allow_reducible=True)


gram_report = GramService.gram_report
validate_gram = GramService.validate_gram
normalized_entries = GramService.normalized_entries
rescale = GramService.rescale
basepoint_rescale = GramService.basepoint_rescale
normalized_rescale = GramService.normalized_rescale
rescaling_equivalent = GramService.rescaling_equivalent
conjugate_space = GramService.conjugate_space
dualized_space = GramService.dualized_space
