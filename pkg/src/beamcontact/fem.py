"""Hermite cubic finite elements for a clamped-clamped Euler-Bernoulli beam.

Each node carries two DOFs, the transverse displacement ``u`` and its slope
``du/dx``. Global ordering is node-major, so free node ``i`` (1 <= i <= n-1)
owns DOFs ``2*(i-1)`` and ``2*(i-1) + 1``. The four DOFs of the clamped end
nodes are removed from the assembled system.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BeamProperties:
    """Material and geometry of the beam (SI units).

    Defaults are the aluminium solar-panel beam used throughout the package.
    """

    E: float = 7.0e10
    I: float = 1.41e-8
    rho: float = 2700.0
    S: float = 7.5e-4
    L: float = 0.485

    def __post_init__(self):
        for name in ("E", "I", "rho", "S", "L"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    @property
    def EI(self) -> float:
        return self.E * self.I

    @property
    def mass_per_length(self) -> float:
        return self.rho * self.S


@dataclass(frozen=True)
class Mesh:
    n_elements: int
    L: float

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("n_elements must be >= 1")

    @property
    def h(self) -> float:
        return self.L / self.n_elements

    @property
    def node_x(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.n_elements + 1)


@dataclass(frozen=True)
class DofMap:
    """Free-DOF numbering of the clamped-clamped mesh."""

    n_elements: int

    @property
    def free_nodes(self) -> range:
        return range(1, self.n_elements)

    @property
    def n_dof(self) -> int:
        return 2 * (self.n_elements - 1)

    def is_free(self, node: int) -> bool:
        return 1 <= node <= self.n_elements - 1

    def displacement_dof(self, node: int) -> int:
        if not self.is_free(node):
            raise ValueError(
                f"node {node} is not a free (interior) node of a "
                f"{self.n_elements}-element clamped beam"
            )
        return 2 * (node - 1)

    def slope_dof(self, node: int) -> int:
        return self.displacement_dof(node) + 1

    @property
    def displacement_dofs(self) -> np.ndarray:
        return np.arange(0, self.n_dof, 2)


@dataclass(frozen=True)
class SystemMatrices:
    M: np.ndarray
    K: np.ndarray
    mesh: Mesh
    dof_map: DofMap = field(repr=False)

    @property
    def n_dof(self) -> int:
        return self.M.shape[0]


def _check_h(h):
    if not np.isfinite(h) or h <= 0:
        raise ValueError(f"element length must be positive, got {h!r}")


def element_stiffness(props: BeamProperties, h: float) -> np.ndarray:
    """Bending stiffness of one element, DOF order (u1, theta1, u2, theta2)."""
    _check_h(h)
    return (props.EI / h**3) * np.array(
        [
            [12.0, 6 * h, -12.0, 6 * h],
            [6 * h, 4 * h * h, -6 * h, 2 * h * h],
            [-12.0, -6 * h, 12.0, -6 * h],
            [6 * h, 2 * h * h, -6 * h, 4 * h * h],
        ]
    )


def element_mass(props: BeamProperties, h: float) -> np.ndarray:
    """Consistent mass matrix of one element, same DOF order as the stiffness."""
    _check_h(h)
    return (props.mass_per_length * h / 420.0) * np.array(
        [
            [156.0, 22 * h, 54.0, -13 * h],
            [22 * h, 4 * h * h, 13 * h, -3 * h * h],
            [54.0, 13 * h, 156.0, -22 * h],
            [-13 * h, -3 * h * h, -22 * h, 4 * h * h],
        ]
    )


def assemble(props: BeamProperties, n_elements: int) -> SystemMatrices:
    """Assemble M and K and strip the clamped DOFs at both ends."""
    if n_elements < 2:
        raise ValueError(
            f"no free DOFs: a clamped-clamped beam needs n_elements >= 2, got {n_elements}"
        )
    mesh = Mesh(n_elements, props.L)
    ke = element_stiffness(props, mesh.h)
    me = element_mass(props, mesh.h)

    n_full = 2 * (n_elements + 1)
    K = np.zeros((n_full, n_full))
    M = np.zeros((n_full, n_full))
    for e in range(n_elements):
        idx = slice(2 * e, 2 * e + 4)
        K[idx, idx] += ke
        M[idx, idx] += me

    free = slice(2, n_full - 2)
    # copies so the result does not keep the full matrices alive
    K = np.ascontiguousarray(K[free, free])
    M = np.ascontiguousarray(M[free, free])
    K.setflags(write=False)
    M.setflags(write=False)
    return SystemMatrices(M=M, K=K, mesh=mesh, dof_map=DofMap(n_elements))
