import itertools
import logging
from typing import Optional

import numpy as np
from scipy import linalg

from core.exceptions import Infeasible, InvalidInput, NotCPP, PickSpaceError, ValidationFailure
from core.models import GramSpace, Tolerances
from core.services import basepoint_rescale, validate_gram
from embedding.services import gram_from_invariants
from invariants.models import DeltaData, InvariantData
from invariants.services import has_cpp

from .models import HartzData, MultiplierSymbol, NormReport, SignPatternReport

logger = logging.getLogger(__name__)


def _check_pair(G: GramSpace, x: int, y: int):
    if not (0 <= x < G.n and 0 <= y < G.n) or x == y:
        raise InvalidInput(f"expected two distinct indices in 0..{G.n - 1}, got {x} and {y}")


class MultiplierService:
    """Multipliers of a finite RKHS and the data they determine"""

    @staticmethod
    def multiplier_norm_report(G: GramSpace, m: MultiplierSymbol) -> NormReport:
        """Operator norm of M_m from the whitened adjoint action.

        M_m^* k_i = conj(m_i) k_i, so with K = L L^H the norm is the largest
        singular value of L^-1 diag(conj m) L.
        """
        if m.n != G.n:
            raise InvalidInput(f"symbol of length {m.n} on a {G.n}-point space")
        K = G.K
        jitter = 0.0
        try:
            L = linalg.cholesky(K, lower=True)
        except linalg.LinAlgError:
            jitter = G.tol.tol_psd * float(np.trace(K).real) / G.n
            logger.warning(f"Cholesky failed; retrying with diagonal jitter {jitter:.3e}")
            L = linalg.cholesky(K + jitter * np.eye(G.n), lower=True)
        A = linalg.solve_triangular(L, np.conj(m.values)[:, None] * L, lower=True)
        norm = float(linalg.svdvals(A)[0])
        return NormReport(norm=norm, jitter=jitter)

    @staticmethod
    def multiplier_norm(G: GramSpace, m: MultiplierSymbol) -> float:
        return MultiplierService.multiplier_norm_report(G, m).norm

    @staticmethod
    def pick_matrix(G: GramSpace, m: MultiplierSymbol) -> np.ndarray:
        """[(1 - conj(m_i) m_j) k_ij]; positive semidefinite exactly when ||M_m|| <= 1"""
        if m.n != G.n:
            raise InvalidInput(f"symbol of length {m.n} on a {G.n}-point space")
        v = m.values
        return (1.0 - np.outer(v.conj(), v)) * G.K

    @staticmethod
    def extremal_multiplier(G: GramSpace, x: int, y: int) -> MultiplierSymbol:
        """(1 - k_xy k_y / (k_yy k_x)) / delta(x, y), vanishing at y with value delta at x"""
        _check_pair(G, x, y)
        K = G.K
        d = np.sqrt(max(1.0 - abs(K[x, y]) ** 2 / (K[x, x].real * K[y, y].real), 0.0))
        values = (1.0 - K[x, y] * K[y, :] / (K[y, y].real * K[x, :])) / d
        return MultiplierSymbol(values)

    @staticmethod
    def extremal_kernel(G: GramSpace, x: int, y: int) -> np.ndarray:
        """Kernel coefficients c of the unit vector vanishing at y that is largest at x; its values are K.T @ c"""
        _check_pair(G, x, y)
        K = G.K
        d = np.sqrt(max(1.0 - abs(K[x, y]) ** 2 / (K[x, x].real * K[y, y].real), 0.0))
        c = np.zeros(G.n, dtype=complex)
        c[x] = 1.0
        c[y] = -K[x, y] / K[y, y].real
        return c / (np.sqrt(K[x, x].real) * d)

    @staticmethod
    def delta_multiplier(G: GramSpace, x: int, y: int, z: int) -> MultiplierSymbol:
        """The multiplier vanishing at y and z whose value at x is Delta(x; y, z)"""
        if len({x, y, z}) != 3 or not all(0 <= i < G.n for i in (x, y, z)):
            raise InvalidInput(f"expected three distinct indices in 0..{G.n - 1}")
        K = G.K
        rest = [y, z]
        coeffs = linalg.solve(K[np.ix_(rest, rest)].T, K[x, rest])
        c = np.zeros(G.n, dtype=complex)
        c[x] = 1.0
        c[rest] = -coeffs
        w = K.T @ c
        norm = np.sqrt(w[x].real)
        return MultiplierSymbol(w / norm * np.sqrt(K[x, x].real) / K[x, :])

    @staticmethod
    def hartz_data(G: GramSpace) -> HartzData:
        certificate = has_cpp(G)
        if not certificate:
            raise NotCPP("Hartz data needs the complete Pick property", certificate.as_dict())
        B = basepoint_rescale(G, 0).K[1:, 1:]
        deltas = np.sqrt(1.0 - 1.0 / B.diagonal().real)
        E = (1.0 - 1.0 / B) / deltas[:, None]
        np.fill_diagonal(E, deltas)
        return HartzData(E)

    @staticmethod
    def reconstruct_from_hartz(H: HartzData, tol: Optional[Tolerances] = None) -> GramSpace:
        """k_jj = 1 / (1 - e_jj^2) and k_jk = 1 / (1 - e_jk e_jj), with the first row all ones"""
        tol = tol or Tolerances()
        E = H.E
        diag = E.diagonal()
        if np.any(np.abs(diag.imag) > tol.tol_eq) or np.any(diag.real <= 0) or np.any(diag.real >= 1):
            raise Infeasible("diagonal Hartz entries must be real and lie in (0, 1)")
        if np.any(np.abs(E) >= 1.0):
            raise Infeasible("Hartz entries must have modulus below 1")

        K = np.ones((H.n, H.n), dtype=complex)
        K[1:, 1:] = 1.0 / (1.0 - E * diag.real[:, None])
        try:
            G = validate_gram(K, tol)
        except ValidationFailure as e:
            raise Infeasible(f"Hartz data do not describe a Gram matrix: {e.msg}") from e
        certificate = has_cpp(G)
        if not certificate:
            raise Infeasible(
                "Hartz data describe a space without the complete Pick property",
                certificate=certificate.as_dict(),
            )
        return G

    @staticmethod
    def ambiguity_classes(D: DeltaData, n: int) -> int:
        """Upper bound 2^((n^2 - 3n)/2) on congruence classes sharing the Delta data"""
        if n < 3:
            raise InvalidInput(f"the bound needs n >= 3, got {n}")
        if D.n != n:
            raise InvalidInput(f"Delta data describe {D.n} kernels, not {n}")
        return 2 ** ((n * n - 3 * n) // 2)

    @staticmethod
    def recovered_cosines(D: DeltaData) -> dict[tuple[int, int, int], float]:
        """cos A_0jk from Delta(0; j, k) and the deltas"""
        out = {}
        for (x, j, k), cap in D.capital_deltas.items():
            d0j, d0k, djk = D.deltas[(x, j)], D.deltas[(x, k)], D.deltas[(j, k)]
            moduli = np.sqrt((1 - d0j**2) * (1 - d0k**2) * (1 - djk**2))
            cosine = (cap**2 * djk**2 - djk**2 - d0j**2 - d0k**2 + 2.0) / (2.0 * moduli)
            out[(x, j, k)] = float(np.clip(cosine, -1.0, 1.0))
        return out

    @staticmethod
    def sign_patterns(D: DeltaData, tol: Optional[Tolerances] = None) -> SignPatternReport:
        """Try every sign choice for the A_0jk recovered from D and keep the realizable ones"""
        tol = tol or Tolerances()
        n = D.n
        report = SignPatternReport(bound=MultiplierService.ambiguity_classes(D, n))
        cosines = MultiplierService.recovered_cosines(D)
        keys = sorted(cosines)
        magnitudes = [float(np.arccos(cosines[key])) for key in keys]

        # the first sign is fixed: flipping every sign is complex conjugation
        for tail in itertools.product((1.0, -1.0), repeat=len(keys) - 1):
            signs = (1.0,) + tail
            angulars = {key: s * a for key, s, a in zip(keys, signs, magnitudes)}
            J = InvariantData(n=n, deltas=dict(D.deltas), angulars=angulars)
            report.tested += 1
            try:
                G = gram_from_invariants(J, tol)
            except PickSpaceError:
                continue
            if has_cpp(G):
                report.feasible.append(angulars)
        logger.debug(f"{report.feasible_count} of {report.tested} sign patterns are realizable")
        return report


multiplier_norm = MultiplierService.multiplier_norm
multiplier_norm_report = MultiplierService.multiplier_norm_report
pick_matrix = MultiplierService.pick_matrix
extremal_multiplier = MultiplierService.extremal_multiplier
extremal_kernel = MultiplierService.extremal_kernel
delta_multiplier = MultiplierService.delta_multiplier
hartz_data = MultiplierService.hartz_data
reconstruct_from_hartz = MultiplierService.reconstruct_from_hartz
ambiguity_classes = MultiplierService.ambiguity_classes
recovered_cosines = MultiplierService.recovered_cosines
sign_patterns = MultiplierService.sign_patterns
