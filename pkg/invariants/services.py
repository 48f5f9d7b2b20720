import itertools
import logging

import numpy as np
from scipy import linalg

from core.exceptions import (
    DegenerateArg,
    InternalInconsistency,
    InvalidInput,
    NotCPP,
    SingularSystem,
    WrongDimension,
)
from core.linalg import hermitian_part, is_psd, principal_arg, wrap_angle
from core.models import GramSpace
from core.services import normalized_entries

from .models import CPPCertificate, DeltaData, InvariantData, MQMatrix

logger = logging.getLogger(__name__)


def _distinct(G: GramSpace, *indices):
    for i in indices:
        if not 0 <= i < G.n:
            raise InvalidInput(f"index {i} outside 0..{G.n - 1}")
    if len(set(indices)) != len(indices):
        raise InvalidInput(f"indices {indices} must be distinct")


class InvariantService:
    """Rescaling-invariant functionals of a Gram matrix"""

    @staticmethod
    def delta(G: GramSpace, i: int, j: int) -> float:
        """delta^2 = 1 - |k_ij|^2 / (k_ii k_jj)"""
        if i == j:
            return 0.0
        K = G.K
        value = 1.0 - abs(K[i, j]) ** 2 / (K[i, i].real * K[j, j].real)
        return float(np.sqrt(min(max(value, 0.0), 1.0)))

    @staticmethod
    def delta_matrix(G: GramSpace) -> np.ndarray:
        khat = np.abs(normalized_entries(G))
        D = np.sqrt(np.clip(1.0 - khat**2, 0.0, 1.0))
        np.fill_diagonal(D, 0.0)
        return D

    @staticmethod
    def projection_delta(G: GramSpace, i: int, j: int) -> float:
        """||P_i - P_j|| for the rank-one projections onto k_i and k_j"""
        # columns of V are the kernels: V^H V = K
        V = linalg.cholesky(G.K, lower=True).conj().T
        vi, vj = V[:, i], V[:, j]
        Pi = np.outer(vi, vi.conj()) / np.vdot(vi, vi).real
        Pj = np.outer(vj, vj.conj()) / np.vdot(vj, vj).real
        evals = linalg.eigvalsh(hermitian_part(Pi - Pj))
        return float(np.max(np.abs(evals)))

    @staticmethod
    def angular_invariant(G: GramSpace, i: int, j: int, k: int) -> float:
        """A_ijk = arg(k_ij k_jk k_ki), principal branch"""
        _distinct(G, i, j, k)
        khat = normalized_entries(G)
        product = khat[i, j] * khat[j, k] * khat[k, i]
        if abs(product) < G.tol.tol_zero**3:
            raise DegenerateArg(f"triple {(i, j, k)} has a vanishing kernel product")
        return principal_arg(G.K[i, j] * G.K[j, k] * G.K[k, i])

    @staticmethod
    def cocycle_defect(G: GramSpace, i: int, j: int, k: int, l: int) -> float:
        _distinct(G, i, j, k, l)
        A = InvariantService.angular_invariant
        return wrap_angle(A(G, i, j, k) - A(G, i, j, l) + A(G, i, k, l) - A(G, j, k, l))

    @staticmethod
    def lf(G: GramSpace, i: int, j: int, k: int) -> float:
        """LF_ijk = |1 - k_ji k_ik / (k_jk k_ii)| / delta_ij"""
        _distinct(G, i, j, k)
        K = G.K
        ratio = K[j, i] * K[i, k] / (K[j, k] * K[i, i])
        return float(abs(1.0 - ratio) / InvariantService.delta(G, i, j))

    @staticmethod
    def mq_matrix(G: GramSpace, r: int) -> MQMatrix:
        if not 0 <= r < G.n:
            raise InvalidInput(f"index {r} outside 0..{G.n - 1}")
        K = G.K
        idx = tuple(i for i in range(G.n) if i != r)
        rows = np.array(idx, dtype=int)
        sub = K[np.ix_(rows, rows)]
        M = 1.0 - np.outer(K[rows, r], K[r, rows]) / (sub * K[r, r].real)
        return MQMatrix(r=r, M=hermitian_part(M), indices=idx)

    @staticmethod
    def has_cpp(G: GramSpace) -> CPPCertificate:
        """Complete Pick property: every MQ_r is positive semidefinite"""
        certificate = CPPCertificate(has_cpp=True)
        for r in range(G.n):
            M = InvariantService.mq_matrix(G, r).M
            ok, lowest = is_psd(M, G.tol.tol_psd)
            certificate.min_eigenvalues[r] = lowest
            if not ok and certificate.has_cpp:
                certificate.has_cpp = False
                certificate.violating_r = r
                certificate.violating_eigenvalue = lowest
        if not certificate.has_cpp:
            logger.debug(
                f"MQ_{certificate.violating_r} has eigenvalue {certificate.violating_eigenvalue:.3e}"
            )
        return certificate

    @staticmethod
    def sti_margins(G: GramSpace, i: int, j: int, k: int) -> tuple[float, float, float]:
        """Signed margins of the three equivalent forms of the strong triangle inequality"""
        _distinct(G, i, j, k)
        delta = InvariantService.delta
        d12, d13, d23 = delta(G, i, j), delta(G, i, k), delta(G, j, k)
        lower = abs(d12 - d13) / (1.0 - d12 * d13)
        upper = (d12 + d13) / (1.0 + d12 * d13)
        first = min(d23 - lower, upper - d23)

        khat = normalized_entries(G)
        a12, a13, a23 = abs(khat[i, j]), abs(khat[i, k]), abs(khat[j, k])
        second = d12 * d13 - abs(1.0 - a12 * a13 / a23)
        third = 2.0 / (a12 * a23 * a13) - (1.0 / a12**2 + 1.0 / a23**2 + 1.0 / a13**2 - 1.0)
        return first, second, third

    @staticmethod
    def sti_holds(G: GramSpace, i: int, j: int, k: int) -> bool:
        margins = InvariantService.sti_margins(G, i, j, k)
        tol = G.tol.tol_eq
        verdicts = [m >= -tol for m in margins]
        if len(set(verdicts)) > 1:
            band = np.sqrt(tol)
            decisive_yes = any(m > band for m in margins)
            decisive_no = any(m < -band for m in margins)
            if decisive_yes and decisive_no:
                raise InternalInconsistency(
                    f"strong triangle inequality forms disagree on {(i, j, k)}",
                    margins=list(margins),
                )
            logger.debug(f"STI forms straddle the boundary on {(i, j, k)}: {margins}")
        return verdicts[0]

    @staticmethod
    def capital_delta(G: GramSpace, x: int, y: int, z: int) -> float:
        """Delta(x; y, z) by Cramer's rule on the 3x3 principal submatrix"""
        _distinct(G, x, y, z)
        idx = [x, y, z]
        K3 = G.K[np.ix_(idx, idx)]
        replaced = K3.copy()
        replaced[:, 0] = [1.0, 0.0, 0.0]
        minor = linalg.det(replaced).real
        scale = K3[1, 1].real * K3[2, 2].real
        if minor < G.tol.tol_zero * scale:
            raise SingularSystem(f"singular interpolation system for {(x, y, z)}", minor=minor)
        value = linalg.det(K3).real / (K3[0, 0].real * minor)
        return float(np.sqrt(max(value, 0.0)))

    @staticmethod
    def capital_delta_closed_form(G: GramSpace, x: int, y: int, z: int) -> float:
        """Delta^2 d23^2 = d23^2 + d12^2 + d13^2 - 2 + 2 Re k12 k23 k31 (normalized)"""
        _distinct(G, x, y, z)
        delta = InvariantService.delta
        d12, d13, d23 = delta(G, x, y), delta(G, x, z), delta(G, y, z)
        khat = normalized_entries(G)
        cross = (khat[x, y] * khat[y, z] * khat[z, x]).real
        value = (d23**2 + d12**2 + d13**2 - 2.0 + 2.0 * cross) / d23**2
        return float(np.sqrt(max(value, 0.0)))

    @staticmethod
    def capital_delta_lf_form(G: GramSpace, x: int, y: int, z: int) -> float:
        delta = InvariantService.delta
        d12, d13, d23 = delta(G, x, y), delta(G, x, z), delta(G, y, z)
        lf = InvariantService.lf(G, x, y, z)
        value = d12**2 * ((d13**2 - lf**2) / d23**2 + lf**2)
        return float(np.sqrt(max(value, 0.0)))

    @staticmethod
    def capital_delta_interpolation(G: GramSpace, x: int, y: int, z: int) -> float:
        """1 / (||k_x|| ||v||) with v the function valued (1, 0, 0) on (x, y, z)"""
        _distinct(G, x, y, z)
        idx = [x, y, z]
        K3 = G.K[np.ix_(idx, idx)]
        c = linalg.solve(K3, np.array([1.0, 0.0, 0.0], dtype=complex), assume_a='her')
        norm_v = np.sqrt(np.vdot(c, K3 @ c).real)
        return float(1.0 / (np.sqrt(K3[0, 0].real) * norm_v))

    @staticmethod
    def invariant_data(G: GramSpace) -> InvariantData:
        D = InvariantService.delta_matrix(G)
        deltas = {(i, j): float(D[i, j]) for i, j in itertools.combinations(range(G.n), 2)}
        angulars = {
            (0, r, s): InvariantService.angular_invariant(G, 0, r, s)
            for r, s in itertools.combinations(range(1, G.n), 2)
        }
        return InvariantData(n=G.n, deltas=deltas, angulars=angulars)

    @staticmethod
    def frak_d(G: GramSpace) -> DeltaData:
        """All delta_ij together with all Delta(0; j, k), for spaces with the CPP"""
        certificate = InvariantService.has_cpp(G)
        if not certificate:
            raise NotCPP("the space does not have the complete Pick property", certificate.as_dict())
        D = InvariantService.delta_matrix(G)
        deltas = {(i, j): float(D[i, j]) for i, j in itertools.combinations(range(G.n), 2)}
        capital = {
            (0, j, k): InvariantService.capital_delta(G, 0, j, k)
            for j, k in itertools.combinations(range(1, G.n), 2)
        }
        return DeltaData(n=G.n, deltas=deltas, capital_deltas=capital)

    @staticmethod
    def pi_half_holds(G: GramSpace) -> bool:
        """cos A_ijk > 0 on every triple (necessary for the CPP)"""
        for i, j, k in itertools.combinations(range(G.n), 3):
            if np.cos(InvariantService.angular_invariant(G, i, j, k)) <= 0:
                return False
        return True

    @staticmethod
    def three_point_margin(G: GramSpace, i: int = 0, j: int = 1, k: int = 2) -> float:
        """2 cos A_ijk / (a_ij a_jk a_ik) - (1/a_ij^2 + 1/a_jk^2 + 1/a_ik^2 - 1) with a = |khat|"""
        _distinct(G, i, j, k)
        khat = normalized_entries(G)
        a_ij, a_jk, a_ik = abs(khat[i, j]), abs(khat[j, k]), abs(khat[i, k])
        cosine = np.cos(InvariantService.angular_invariant(G, i, j, k))
        lhs = 1.0 / a_ij**2 + 1.0 / a_jk**2 + 1.0 / a_ik**2 - 1.0
        return float(2.0 * cosine / (a_ij * a_jk * a_ik) - lhs)

    @staticmethod
    def three_point_inequality(G: GramSpace) -> bool:
        """The angle inequality that decides the CPP of a three point space"""
        if G.n != 3:
            raise WrongDimension(f"expected a 3-point space, got {G.n}")
        margin = InvariantService.three_point_margin(G)
        logger.debug(f"Three point inequality margin {margin:.3e}")
        return margin >= -G.tol.tol_eq


delta = InvariantService.delta
delta_matrix = InvariantService.delta_matrix
projection_delta = InvariantService.projection_delta
angular_invariant = InvariantService.angular_invariant
cocycle_defect = InvariantService.cocycle_defect
lf = InvariantService.lf
mq_matrix = InvariantService.mq_matrix
has_cpp = InvariantService.has_cpp
mq_certificate = InvariantService.has_cpp
sti_margins = InvariantService.sti_margins
sti_holds = InvariantService.sti_holds
capital_delta = InvariantService.capital_delta
capital_delta_closed_form = InvariantService.capital_delta_closed_form
capital_delta_lf_form = InvariantService.capital_delta_lf_form
capital_delta_interpolation = InvariantService.capital_delta_interpolation
invariant_data = InvariantService.invariant_data
frak_d = InvariantService.frak_d
pi_half_holds = InvariantService.pi_half_holds
three_point_margin = InvariantService.three_point_margin
three_point_inequality = InvariantService.three_point_inequality
