"""Small numerical helpers shared by the apps."""

import numpy as np
from scipy import linalg


def hermitian_part(M):
    M = np.asarray(M, dtype=complex)
    return (M + M.conj().T) / 2


def matrices_close(A, B, tol):
    """Relative Frobenius equality: ||A - B||_F <= tol * (1 + ||A||_F)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        return False
    return np.linalg.norm(A - B) <= tol * (1.0 + np.linalg.norm(A))


def extreme_eigenvalues(M):
    """Smallest and largest eigenvalue of the Hermitian part of M."""
    if np.size(M) == 0:
        return 0.0, 0.0
    evals = linalg.eigvalsh(hermitian_part(M))
    return float(evals[0]), float(evals[-1])


def is_psd(M, tol_psd, absolute_floor=True):
    """PSD test with the threshold lambda_min >= -tol_psd * max(1, lambda_max).

    With ``absolute_floor=False`` the threshold is relative to lambda_max only.
    Returns the verdict and the smallest eigenvalue.
    """
    lo, hi = extreme_eigenvalues(M)
    scale = max(1.0, hi) if absolute_floor else abs(hi)
    return lo >= -tol_psd * scale, lo


def principal_arg(z):
    """Argument in (-pi, pi]."""
    angle = float(np.angle(z))
    if angle <= -np.pi:
        angle += 2 * np.pi
    return angle


def wrap_angle(theta):
    """Reduce an angle into (-pi, pi]."""
    wrapped = float(np.mod(theta + np.pi, 2 * np.pi) - np.pi)
    if wrapped <= -np.pi:
        wrapped += 2 * np.pi
    return wrapped


def ensure_square(K):
    """True for a nonempty square matrix."""
    K = np.asarray(K)
    return K.ndim == 2 and K.shape[0] == K.shape[1] and K.shape[0] > 0
