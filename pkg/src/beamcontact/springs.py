"""Snubber spring and shaker excitation descriptions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .fem import SystemMatrices


class SpringMode(str, enum.Enum):
    NONE = "none"
    BILATERAL = "bilateral"
    UNILATERAL = "unilateral"


@dataclass(frozen=True)
class SpringConfig:
    """Linear spring of stiffness ``k_r`` between the shaker and a beam node.

    ``node`` is a mesh node index; it must be interior. In unilateral mode
    the spring only pushes (compression), i.e. it acts while d(t) > u(x0).
    """

    k_r: float = 1.0e6
    node: int = 1
    mode: SpringMode = SpringMode.UNILATERAL

    def __post_init__(self):
        object.__setattr__(self, "mode", SpringMode(self.mode))
        if not np.isfinite(self.k_r) or self.k_r < 0:
            raise ValueError(f"k_r must be >= 0, got {self.k_r!r}")
        if self.node < 1:
            raise ValueError(f"spring node must be interior, got {self.node}")

    @classmethod
    def at_middle(cls, n_elements, k_r=1.0e6, mode=SpringMode.UNILATERAL):
        if n_elements % 2:
            raise ValueError("the beam middle is a node only for an even element count")
        return cls(k_r=k_r, node=n_elements // 2, mode=mode)

    @property
    def active(self) -> bool:
        return self.mode is not SpringMode.NONE

    def dof(self, sys: SystemMatrices) -> int:
        """Global index of the displacement DOF the spring acts on."""
        return sys.dof_map.displacement_dof(self.node)

    def x0(self, sys: SystemMatrices) -> float:
        return self.node * sys.mesh.h

    def contact_stiffness(self, sys: SystemMatrices) -> np.ndarray:
        """K plus the spring stiffness on its DOF (the fully engaged system)."""
        K = np.array(sys.K)
        if self.active:
            j = self.dof(sys)
            K[j, j] += self.k_r
        return K


@dataclass(frozen=True)
class Excitation:
    """Sinusoidal shaker motion with imposed acceleration ``a*sin(2*pi*f*t)``."""

    a: float = 50.0
    f: float = 500.0
    enabled: bool = True

    def __post_init__(self):
        if self.enabled:
            if not np.isfinite(self.a) or self.a < 0:
                raise ValueError(f"excitation amplitude must be >= 0, got {self.a!r}")
            if not np.isfinite(self.f) or self.f <= 0:
                raise ValueError(f"excitation frequency must be > 0, got {self.f!r}")

    @classmethod
    def off(cls):
        return cls(a=0.0, f=0.0, enabled=False)

    @property
    def displacement_amplitude(self) -> float:
        if not self.enabled:
            return 0.0
        return self.a / (2 * math.pi * self.f) ** 2

    def d(self, t):
        if not self.enabled:
            return np.zeros_like(t, dtype=float) if np.ndim(t) else 0.0
        w = 2 * math.pi * self.f
        return -self.a / w**2 * np.sin(w * t)

    def d_ddot(self, t):
        if not self.enabled:
            return np.zeros_like(t, dtype=float) if np.ndim(t) else 0.0
        return self.a * np.sin(2 * math.pi * self.f * t)


def positive_part(x):
    """(x + |x|) / 2, elementwise."""
    return (x + np.abs(x)) / 2


def spring_force(spring: SpringConfig, exc: Excitation, t, q_x0):
    """Force applied by the spring on the displacement DOF of its node."""
    if not spring.active:
        return np.zeros(np.shape(q_x0)) if np.ndim(q_x0) else 0.0
    stretch = exc.d(t) - q_x0
    if spring.mode is SpringMode.UNILATERAL:
        stretch = positive_part(stretch)
    return spring.k_r * stretch
