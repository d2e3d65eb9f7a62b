"""Stepped sweep-up test: one independent forced run per excitation frequency."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dynamics import Excitation, StabilityError, _Prepared, default_dt, n_steps_for, stability_limit
from .fem import BeamProperties, assemble
from .springs import SpringConfig

THREADS_ENV = "BEAMCONTACT_THREADS"


@dataclass(frozen=True)
class SweepConfig:
    f0: float = 100.0
    f1: float = 1000.0
    df: float = 5.0
    a: float = 50.0
    tf: float = 0.1
    spring: SpringConfig = field(default_factory=lambda: SpringConfig.at_middle(2))
    n_elements: int = 2
    dt: float | None = None

    def __post_init__(self):
        if not self.f0 > 0:
            raise ValueError("f0 must be > 0")
        if not self.f1 > self.f0:
            raise ValueError("f1 must be > f0")
        if not self.df > 0:
            raise ValueError("df must be > 0")
        if not self.tf > 0:
            raise ValueError("tf must be > 0")
        if self.a < 0:
            raise ValueError("a must be >= 0")
        if self.n_elements < 2:
            raise ValueError("no free DOFs: n_elements must be >= 2")
        if not 1 <= self.spring.node <= self.n_elements - 1:
            raise ValueError(f"spring node {self.spring.node} is not interior")

    def grid(self) -> np.ndarray:
        n = math.floor((self.f1 - self.f0) / self.df + 1e-9)
        return self.f0 + self.df * np.arange(n + 1)


@dataclass
class SweepResult:
    """Per grid frequency (rows) and free node (columns) response maxima.

    Rows of failed points are NaN; ``failures`` maps their frequency to the
    reason.
    """

    frequencies: np.ndarray
    nodes: np.ndarray
    max_displacement: np.ndarray
    max_acceleration: np.ndarray
    failures: dict = field(default_factory=dict)

    def column(self, node: int) -> int:
        hits = np.flatnonzero(self.nodes == node)
        if len(hits) == 0:
            raise ValueError(f"node {node} is not a free node of this sweep")
        return int(hits[0])


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_sweep(props: BeamProperties, config: SweepConfig, threads: int | None = None, frequencies=None) -> SweepResult:
    """Run the sweep over ``config.grid()`` (or an explicit frequency list).

    Each point starts from rest and is integrated over [0, tf]; maxima of
    |u_i| and |u_i''| are taken over every time step. Points share nothing,
    so they run on a thread pool and are gathered back in grid order.
    """
    sys = assemble(props, config.n_elements)
    spring = config.spring
    if spring.active:
        spring.dof(sys)
    dt = config.dt if config.dt is not None else default_dt(sys, spring)
    bound = stability_limit(sys, spring)
    if dt > bound:
        raise StabilityError(dt, bound)
    prep = _Prepared(sys, spring)
    n_steps = n_steps_for(config.tf, dt)
    disp_dofs = sys.dof_map.displacement_dofs
    freqs = config.grid() if frequencies is None else np.asarray(frequencies, dtype=float)

    def point(f):
        exc = Excitation(a=config.a, f=float(f))
        qmax = np.empty(sys.n_dof)
        amax = np.empty(sys.n_dof)
        failed = _kernels.running_maxima(
            *prep.kernel_args(exc), np.zeros(sys.n_dof), np.zeros(sys.n_dof), dt, n_steps, qmax, amax
        )
        if failed >= 0:
            return None, None, f"non-finite state at t = {failed * dt:.9g} s"
        return qmax[disp_dofs], amax[disp_dofs], None

    threads = thread_count() if threads is None else max(1, int(threads))
    if threads == 1:
        outs = [point(f) for f in freqs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(point, freqs))

    n_nodes = len(disp_dofs)
    max_disp = np.full((len(freqs), n_nodes), np.nan)
    max_acc = np.full((len(freqs), n_nodes), np.nan)
    failures = {}
    for i, (qm, am, err) in enumerate(outs):
        if err is None:
            max_disp[i] = qm
            max_acc[i] = am
        else:
            failures[float(freqs[i])] = err
    return SweepResult(
        frequencies=freqs,
        nodes=np.array(list(sys.dof_map.free_nodes)),
        max_displacement=max_disp,
        max_acceleration=max_acc,
        failures=failures,
    )


def argmax_frequency(result: SweepResult, node: int) -> float:
    """Grid frequency of the largest displacement maximum at ``node``.

    Ties go to the lowest frequency; failed points are ignored.
    """
    if len(result.frequencies) == 0:
        raise ValueError("empty sweep result")
    col = result.max_displacement[:, result.column(node)]
    if np.all(np.isnan(col)):
        raise ValueError("every sweep point failed")
    return float(result.frequencies[np.nanargmax(col)])


def local_peaks(result: SweepResult, node: int) -> np.ndarray:
    """Grid frequencies where the node's displacement maximum beats both neighbours."""
    c = result.max_displacement[:, result.column(node)]
    inner = (c[1:-1] > c[:-2]) & (c[1:-1] > c[2:])
    return result.frequencies[1:-1][inner]
