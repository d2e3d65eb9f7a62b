"""Compiled fixed-step RK4 loops.

The equations of motion are pre-multiplied by M^-1:

    q'' = -A q + b * k_r * s(d(t) - q[j]),   d(t) = -amp * sin(w t)

where s is the identity (bilateral) or the positive part (unilateral).
``mode`` is 0 (no spring), 1 (bilateral) or 2 (unilateral).
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def accel(t, q, A, b, j, k_r, mode, amp, w, out):
    n = q.shape[0]
    force = 0.0
    if mode != 0:
        stretch = -amp * np.sin(w * t) - q[j]
        if mode == 2 and stretch < 0.0:
            stretch = 0.0
        force = k_r * stretch
    for i in range(n):
        s = force * b[i]
        for k in range(n):
            s -= A[i, k] * q[k]
        out[i] = s


@njit(cache=True, nogil=True)
def _rk4_step(t, dt, q, v, A, b, j, k_r, mode, amp, w, k1, k2, k3, k4, qt):
    """Advance (q, v) in place by one classical RK4 step; k1 must hold accel(t, q)."""
    n = q.shape[0]
    h2 = 0.5 * dt
    # stage 2: y + h/2 * f(y)
    for i in range(n):
        qt[i] = q[i] + h2 * v[i]
    accel(t + h2, qt, A, b, j, k_r, mode, amp, w, k2)
    # stage 3: velocity slot of stage 2 is v + h/2*k1
    for i in range(n):
        qt[i] = q[i] + h2 * (v[i] + h2 * k1[i])
    accel(t + h2, qt, A, b, j, k_r, mode, amp, w, k3)
    for i in range(n):
        qt[i] = q[i] + dt * (v[i] + h2 * k2[i])
    accel(t + dt, qt, A, b, j, k_r, mode, amp, w, k4)
    for i in range(n):
        v1 = v[i]
        v2 = v[i] + h2 * k1[i]
        v3 = v[i] + h2 * k2[i]
        v4 = v[i] + dt * k3[i]
        q[i] = q[i] + dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4)
        v[i] = v[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True, nogil=True)
def _finite(q, v):
    s = 0.0
    for i in range(q.shape[0]):
        s += q[i] + v[i]
    return np.isfinite(s)


@njit(cache=True, nogil=True)
def integrate(A, b, j, k_r, mode, amp, w, t0, q0, v0, dt, n_steps, every, Q, V, ACC):
    """Fill Q, V, ACC with every ``every``-th state. Returns the failing step or -1."""
    n = q0.shape[0]
    q = q0.copy()
    v = v0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    qt = np.empty(n)
    accel(t0, q, A, b, j, k_r, mode, amp, w, k1)
    Q[0, :] = q
    V[0, :] = v
    ACC[0, :] = k1
    o = 1
    for s in range(n_steps):
        t = t0 + s * dt
        _rk4_step(t, dt, q, v, A, b, j, k_r, mode, amp, w, k1, k2, k3, k4, qt)
        if not _finite(q, v):
            return s + 1
        accel(t0 + (s + 1) * dt, q, A, b, j, k_r, mode, amp, w, k1)
        if (s + 1) % every == 0:
            Q[o, :] = q
            V[o, :] = v
            ACC[o, :] = k1
            o += 1
    return -1


@njit(cache=True, nogil=True)
def running_maxima(A, b, j, k_r, mode, amp, w, q0, v0, dt, n_steps, qmax, amax):
    """Integrate from t=0 tracking max |q_i| and max |q''_i| over every step.

    Returns the failing step or -1.
    """
    n = q0.shape[0]
    q = q0.copy()
    v = v0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    qt = np.empty(n)
    accel(0.0, q, A, b, j, k_r, mode, amp, w, k1)
    for i in range(n):
        qmax[i] = abs(q[i])
        amax[i] = abs(k1[i])
    for s in range(n_steps):
        _rk4_step(s * dt, dt, q, v, A, b, j, k_r, mode, amp, w, k1, k2, k3, k4, qt)
        if not _finite(q, v):
            return s + 1
        accel((s + 1) * dt, q, A, b, j, k_r, mode, amp, w, k1)
        for i in range(n):
            aq = abs(q[i])
            if aq > qmax[i]:
                qmax[i] = aq
            ak = abs(k1[i])
            if ak > amax[i]:
                amax[i] = ak
    return -1
