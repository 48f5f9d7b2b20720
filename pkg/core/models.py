from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .exceptions import InvalidInput, InvalidTolerance


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout the library.

    ``tol_eq`` is relative (matrix equality is measured against
    ``1 + ||A||_F``), ``tol_psd`` is the eigenvalue ratio for definiteness,
    ``tol_zero`` separates zero from nonzero kernel entries, ``tol_rank``
    decides linear dependence and conditioning, and ``tol_class`` is the
    looser threshold applied to classification residuals.
    """

    tol_eq: float = 1e-8
    tol_psd: float = 1e-10
    tol_zero: float = 1e-12
    tol_rank: float = 1e-10
    tol_class: float = 1e-7

    def __post_init__(self):
        for name in ('tol_eq', 'tol_psd', 'tol_zero', 'tol_rank', 'tol_class'):
            value = getattr(self, name)
            if not (0.0 < value < 1e-2):
                raise InvalidTolerance(f"{name}={value!r} must lie in (0, 1e-2)", name=name)

    @classmethod
    def from_settings(cls, **overrides) -> Tolerances:
        """Build the tolerance set configured in ``settings.PICKSPACE``."""
        from django.conf import settings

        conf = getattr(settings, 'PICKSPACE', {})
        values = {
            'tol_eq': conf.get('TOL_EQ', cls.tol_eq),
            'tol_psd': conf.get('TOL_PSD', cls.tol_psd),
            'tol_zero': conf.get('TOL_ZERO', cls.tol_zero),
            'tol_rank': conf.get('TOL_RANK', cls.tol_rank),
            'tol_class': conf.get('TOL_CLASS', cls.tol_class),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_overrides(self, **overrides) -> Tolerances:
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_dict(self) -> dict:
        return {
            'tol_eq': self.tol_eq,
            'tol_psd': self.tol_psd,
            'tol_zero': self.tol_zero,
            'tol_rank': self.tol_rank,
            'tol_class': self.tol_class,
        }


def frozen_array(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GramSpace:
    """A finite dimensional RKHS given by the Gram matrix of its kernels.

    Instances are produced by ``core.services.validate_gram`` and are
    immutable. ``provenance`` records how the matrix was built ("tree" for
    kernels of the form Omega(x ^ y)); ``reducible_pair`` is set only on the
    documented downgrade path of ``dualized_space``.
    """

    K: np.ndarray
    labels: Optional[tuple[str, ...]] = None
    tol: Tolerances = field(default_factory=Tolerances)
    provenance: str = ''
    reducible_pair: Optional[tuple[int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, 'K', frozen_array(self.K))
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != self.K.shape[0]:
                raise InvalidInput(f"{len(labels)} labels for a {self.K.shape[0]}-point space")
            object.__setattr__(self, 'labels', labels)

    @property
    def n(self) -> int:
        return self.K.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return self.K.diagonal().real

    def __repr__(self):
        return f"GramSpace(n={self.n}, provenance={self.provenance!r})"


@dataclass(frozen=True, eq=False)
class RescalingMap:
    """Diagonal rescaling with optional relabeling.

    Entry (i, j) of the rescaled Gram matrix is
    ``gamma[i] * K[perm[i], perm[j]] * conj(gamma[j])``.
    """

    gamma: np.ndarray
    perm: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        gamma = frozen_array(np.ravel(self.gamma))
        if not np.all(np.isfinite(gamma)) or np.any(np.abs(gamma) == 0):
            raise InvalidInput("rescaling factors must be finite and nonzero")
        object.__setattr__(self, 'gamma', gamma)
        if self.perm is not None:
            perm = tuple(int(p) for p in self.perm)
            if sorted(perm) != list(range(len(gamma))):
                raise InvalidInput(f"{perm} is not a permutation of 0..{len(gamma) - 1}")
            object.__setattr__(self, 'perm', perm)

    @property
    def n(self) -> int:
        return len(self.gamma)

    @classmethod
    def identity(cls, n: int) -> RescalingMap:
        return cls(np.ones(n, dtype=complex))


@dataclass
class ValidationReport:
    """Outcome of checking a candidate Gram matrix against its invariants."""

    hermitian: bool = True
    positive_definite: bool = True
    irreducible: bool = True
    reducible_pair: Optional[tuple[int, int]] = None
    min_eigenvalue: float = float('nan')
    max_eigenvalue: float = float('nan')
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            'hermitian': self.hermitian,
            'positive_definite': self.positive_definite,
            'irreducible': self.irreducible,
            'reducible_pair': list(self.reducible_pair) if self.reducible_pair else None,
            'min_eigenvalue': self.min_eigenvalue,
            'max_eigenvalue': self.max_eigenvalue,
            'failures': list(self.failures),
        }
