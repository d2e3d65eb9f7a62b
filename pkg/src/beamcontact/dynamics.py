"""Forced motion of the beam with a bilateral or unilateral snubber spring.

The discrete system is

    M q'' + K q = k_r * s(d(t) - q_x0) * e_x0

with s the identity (bilateral) or the positive part (unilateral). It is
integrated with classical fixed-step RK4; the kink of the positive part is
evaluated pointwise, without event location. The right-hand side is
Lipschitz, so this converges, just not at full fourth order across contact
switches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from . import _kernels
from .fem import SystemMatrices
from .modal import max_frequency
from .springs import (  # noqa: F401  (re-exported)
    Excitation,
    SpringConfig,
    SpringMode,
    positive_part,
    spring_force,
)

_MODE_CODE = {SpringMode.NONE: 0, SpringMode.BILATERAL: 1, SpringMode.UNILATERAL: 2}

# RK4 is stable on the imaginary axis for |omega*dt| <= 2*sqrt(2)
RK4_IMAG_LIMIT = 2.0 * math.sqrt(2.0)


class DivergenceError(RuntimeError):
    def __init__(self, time):
        super().__init__(f"integration produced a non-finite state at t = {time:.9g} s")
        self.time = time


class StabilityError(ValueError):
    def __init__(self, dt, bound):
        super().__init__(
            f"dt = {dt:.6g} s exceeds the RK4 stability bound {bound:.6g} s "
            f"for the stiffest mode of this model"
        )
        self.dt = dt
        self.bound = bound


@dataclass(frozen=True)
class State:
    t: float
    q: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if q.shape != v.shape or q.ndim != 1:
            raise ValueError("q and v must be 1-D vectors of equal length")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "v", v)

    @classmethod
    def rest(cls, sys: SystemMatrices):
        return cls(0.0, np.zeros(sys.n_dof), np.zeros(sys.n_dof))

    @classmethod
    def released(cls, sys: SystemMatrices, node: int, displacement: float = 0.4):
        """Beam at rest with one node displaced, every other DOF zero."""
        q = np.zeros(sys.n_dof)
        q[sys.dof_map.displacement_dof(node)] = displacement
        return cls(0.0, q, np.zeros(sys.n_dof))

    def scaled(self, alpha):
        return State(self.t, alpha * self.q, alpha * self.v)


@dataclass
class TimeSeries:
    """Uniformly sampled trajectory; row k is the state at t[k]."""

    dt: float
    t: np.ndarray
    q: np.ndarray
    v: np.ndarray
    acc: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return len(self.t)

    @property
    def n_dof(self) -> int:
        return self.q.shape[1]

    def state(self, k) -> State:
        return State(float(self.t[k]), self.q[k].copy(), self.v[k].copy())

    def final_state(self) -> State:
        return self.state(-1)


class _Prepared:
    """M^-1 applied once to K and to the spring direction."""

    def __init__(self, sys: SystemMatrices, spring: SpringConfig):
        self.cho = la.cho_factor(sys.M, lower=True)
        self.A = la.cho_solve(self.cho, sys.K)
        if spring.active:
            self.j = spring.dof(sys)
            e = np.zeros(sys.n_dof)
            e[self.j] = 1.0
            self.b = la.cho_solve(self.cho, e)
        else:
            self.j = 0
            self.b = np.zeros(sys.n_dof)
        self.k_r = float(spring.k_r)
        self.mode = _MODE_CODE[spring.mode]

    def kernel_args(self, exc: Excitation):
        if exc.enabled:
            amp, w = exc.displacement_amplitude, 2 * math.pi * exc.f
        else:
            amp, w = 0.0, 0.0
        return self.A, self.b, self.j, self.k_r, self.mode, amp, w


def stability_limit(sys: SystemMatrices, spring: SpringConfig) -> float:
    """Largest dt for which RK4 is stable on the fully engaged system."""
    return RK4_IMAG_LIMIT / (2 * math.pi * max_frequency(sys, spring))


def default_dt(sys: SystemMatrices, spring: SpringConfig) -> float:
    """min(1 us, 0.25/f_max), rounded down to a power of two.

    The power of two keeps sample grids aligned with power-of-two FFT lengths.
    """
    target = min(1.0e-6, 0.25 / max_frequency(sys, spring))
    return 2.0 ** math.floor(math.log2(target))


def n_steps_for(t_end, dt) -> int:
    return max(0, math.ceil(t_end / dt - 1e-9))


def rhs(state: State, sys: SystemMatrices, spring: SpringConfig, exc: Excitation):
    """(dq/dt, dv/dt) of the first-order form of the equations of motion."""
    force = np.zeros(sys.n_dof)
    if spring.active:
        j = spring.dof(sys)
        force[j] = spring_force(spring, exc, state.t, state.q[j])
    cho = la.cho_factor(sys.M, lower=True)
    dv = la.cho_solve(cho, force - sys.K @ state.q)
    return state.v.copy(), dv


def integrate(
    sys: SystemMatrices,
    spring: SpringConfig,
    exc: Excitation,
    ic: State,
    t_end: float,
    dt: float | None = None,
    output_every: int = 1,
    metadata: dict | None = None,
) -> TimeSeries:
    """Integrate from ``ic`` for ``t_end`` seconds with a fixed step.

    The step count is ceil(t_end/dt); samples are taken every
    ``output_every`` steps, starting with the initial state. Accelerations
    are evaluated from the equations of motion at each sample.
    """
    if len(ic.q) != sys.n_dof:
        raise ValueError(f"initial state has {len(ic.q)} DOFs, model has {sys.n_dof}")
    if output_every < 1:
        raise ValueError("output_every must be >= 1")
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    if spring.active:
        spring.dof(sys)  # rejects a non-interior node
    bound = stability_limit(sys, spring)
    if dt is None:
        dt = default_dt(sys, spring)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if dt > bound:
        raise StabilityError(dt, bound)

    prep = _Prepared(sys, spring)
    n_steps = n_steps_for(t_end, dt)
    n_out = n_steps // output_every + 1
    Q = np.empty((n_out, sys.n_dof))
    V = np.empty_like(Q)
    ACC = np.empty_like(Q)
    failed = _kernels.integrate(
        *prep.kernel_args(exc), float(ic.t), ic.q, ic.v, float(dt), n_steps, output_every, Q, V, ACC
    )
    if failed >= 0:
        raise DivergenceError(ic.t + failed * dt)

    t = ic.t + dt * output_every * np.arange(n_out)
    meta = {
        "n_elements": sys.mesh.n_elements,
        "spring_mode": spring.mode.value,
        "spring_node": spring.node,
        "spring_dof": spring.dof(sys) if spring.active else 0,
        "k_r": spring.k_r,
        "excitation_enabled": exc.enabled,
        "a": exc.a,
        "f": exc.f,
        "dt_step": dt,
        "output_every": output_every,
    }
    meta.update(metadata or {})
    return TimeSeries(dt=dt * output_every, t=t, q=Q, v=V, acc=ACC, metadata=meta)


def two_phase_frequency(M11: float, K11: float, k_r: float) -> float:
    """Free-vibration frequency (Hz) of a one-DOF oscillator with a one-sided spring.

    Half a period is spent out of contact (stiffness K11) and half a period
    in contact (stiffness K11 + k_r).
    """
    if M11 <= 0 or K11 <= 0:
        raise ValueError("M11 and K11 must be positive")
    if k_r < 0:
        raise ValueError("k_r must be >= 0")
    T = math.pi / math.sqrt(K11 / M11) + math.pi / math.sqrt((K11 + k_r) / M11)
    return 1.0 / T


def total_energy(state: State, sys: SystemMatrices, spring: SpringConfig, exc: Excitation | None = None) -> float:
    """Kinetic + strain + spring energy of the autonomous (unexcited) system."""
    if exc is not None and exc.enabled:
        raise ValueError("total energy is only conserved, and only defined here, without excitation")
    q, v = state.q, state.v
    e = 0.5 * v @ sys.M @ v + 0.5 * q @ sys.K @ q
    if spring.active:
        compression = -q[spring.dof(sys)]
        if spring.mode is SpringMode.UNILATERAL:
            compression = positive_part(compression)
        e += 0.5 * spring.k_r * compression**2
    return float(e)


def energy_history(series: TimeSeries, sys: SystemMatrices, spring: SpringConfig) -> np.ndarray:
    return np.array([total_energy(series.state(k), sys, spring) for k in range(series.n_samples)])
