"""Eigenfrequencies of the linear beam, discrete and closed-form."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .fem import BeamProperties, SystemMatrices
from .springs import SpringConfig, SpringMode

# clamped-clamped frequency constants mu_i (roots of cos(mu)*cosh(mu) = 1)
CLAMPED_CLAMPED_MU = (4.73, 7.853, 10.996)


@dataclass(frozen=True)
class AnalyticModeConstants:
    mu: tuple = CLAMPED_CLAMPED_MU

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        if any(m <= 0 for m in self.mu):
            raise ValueError("mode constants must be positive")


@dataclass(frozen=True)
class ModalResult:
    frequencies_hz: np.ndarray
    n_requested: int
    eigenvalues: np.ndarray = field(repr=False)
    # columns are M-orthonormal mode shapes
    vectors: np.ndarray = field(repr=False)


def _reduced_eigh(K, M):
    """Solve K v = lam M v through the Cholesky factor of M.

    Returns ascending eigenvalues and M-orthonormal eigenvectors.
    """
    Lc = la.cholesky(M, lower=True)
    # C = L^-1 K L^-T
    tmp = la.solve_triangular(Lc, K, lower=True)
    C = la.solve_triangular(Lc, tmp.T, lower=True).T
    C = 0.5 * (C + C.T)
    lam, y = np.linalg.eigh(C)
    v = la.solve_triangular(Lc.T, y, lower=False)
    return lam, v


def eigenfrequencies(sys: SystemMatrices, k: int, spring: SpringConfig | None = None) -> ModalResult:
    """Lowest ``k`` eigenfrequencies (Hz) of the beam, optionally with a bilateral spring."""
    if k < 1:
        raise ValueError(f"number of modes must be >= 1, got {k}")
    if spring is not None and spring.mode is SpringMode.UNILATERAL:
        raise ValueError("a unilateral spring makes the system nonlinear; it has no linear modes")
    K = sys.K if spring is None else spring.contact_stiffness(sys)
    lam, v = _reduced_eigh(K, sys.M)
    if lam[0] <= 0:
        raise np.linalg.LinAlgError("stiffness matrix is not positive definite")
    m = min(k, len(lam))
    return ModalResult(
        frequencies_hz=np.sqrt(lam[:m]) / (2 * math.pi),
        n_requested=k,
        eigenvalues=lam[:m],
        vectors=v[:, :m],
    )


def max_frequency(sys: SystemMatrices, spring: SpringConfig | None = None) -> float:
    """Highest eigenfrequency (Hz) with the spring fully engaged.

    This bounds every frequency the explicit integrator has to resolve,
    whatever the contact state.
    """
    K = sys.K if spring is None else spring.contact_stiffness(sys)
    lam, _ = _reduced_eigh(K, sys.M)
    return math.sqrt(lam[-1]) / (2 * math.pi)


def analytic_frequencies(props: BeamProperties, mu: AnalyticModeConstants | None = None) -> np.ndarray:
    """f_i = sqrt(mu_i^4 * E*I / (rho*S*L^4)) / (2*pi) for a clamped-clamped beam."""
    mu = AnalyticModeConstants() if mu is None else mu
    m = np.asarray(mu.mu)
    return np.sqrt(m**4 * props.EI / (props.mass_per_length * props.L**4)) / (2 * math.pi)
