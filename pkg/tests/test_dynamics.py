import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamcontact import (
    DivergenceError,
    Excitation,
    SpringConfig,
    SpringMode,
    StabilityError,
    State,
    eigenfrequencies,
    integrate,
    rhs,
    total_energy,
    two_phase_frequency,
)
from beamcontact.dynamics import default_dt, energy_history, stability_limit

OFF = Excitation.off()
UNI2 = SpringConfig.at_middle(2, 1e6, SpringMode.UNILATERAL)
BIL2 = SpringConfig.at_middle(2, 1e6, SpringMode.BILATERAL)
NONE2 = SpringConfig.at_middle(2, 1e6, SpringMode.NONE)


def two_phase_exact(t, A, m, k, k_r):
    """Closed-form free motion of m u'' + k u = k_r * (-u)_+ released from u=A>0 at rest."""
    w0 = math.sqrt(k / m)
    w1 = math.sqrt((k + k_r) / m)
    t_open = math.pi / (2 * w0)
    t_contact = math.pi / w1
    T = math.pi / w0 + t_contact
    tau = np.mod(t, T)
    return np.where(
        tau < t_open,
        A * np.cos(w0 * tau),
        np.where(
            tau < t_open + t_contact,
            -(A * w0 / w1) * np.sin(w1 * (tau - t_open)),
            A * np.sin(w0 * (tau - t_open - t_contact)),
        ),
    )


class TestRhs:
    def test_equilibrium(self, sys2):
        dq, dv = rhs(State.rest(sys2), sys2, UNI2, OFF)
        np.testing.assert_array_equal(dq, 0.0)
        np.testing.assert_array_equal(dv, 0.0)

    def test_contact_force_pattern(self, sys10):
        spring = SpringConfig.at_middle(10, 1e6, SpringMode.UNILATERAL)
        exc = Excitation(a=50.0, f=500.0)
        t = 0.75 / 500.0  # d(t) > 0
        dq, dv = rhs(State(t, np.zeros(18), np.zeros(18)), sys10, spring, exc)
        e = np.zeros(18)
        e[8] = 1e6 * exc.d(t)
        expected = np.linalg.solve(sys10.M, e)
        np.testing.assert_allclose(dv, expected, rtol=1e-12, atol=1e-12 * np.abs(expected).max())
        np.testing.assert_array_equal(dq, 0.0)

    def test_released_two_element_beam(self, sys2):
        state = State.released(sys2, 1, 0.4)
        dq, dv = rhs(state, sys2, UNI2, OFF)
        assert dv[0] == pytest.approx(-sys2.K[0, 0] * 0.4 / sys2.M[0, 0], rel=1e-14)
        assert dv[0] == pytest.approx(-1661090 * 0.4 / 0.3647893, rel=2e-4)
        assert dv[1] == 0.0


class TestTwoPhaseFrequency:
    def test_without_spring_is_linear_frequency(self, sys2):
        f = two_phase_frequency(0.3647893, 1661090, 0.0)
        assert f == pytest.approx(339.62, abs=0.01)
        f_modal = eigenfrequencies(sys2, 1).frequencies_hz[0]
        assert two_phase_frequency(sys2.M[0, 0], sys2.K[0, 0], 0.0) == pytest.approx(f_modal, rel=1e-12)

    def test_reference_stiffness(self):
        assert two_phase_frequency(0.3647893, 1661090, 1e6) == pytest.approx(379.45, abs=0.01)

    def test_rejects_bad_arguments(self):
        for args in [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, -1.0)]:
            with pytest.raises(ValueError):
                two_phase_frequency(*args)


class TestEnergy:
    def test_zero_state(self, sys2):
        assert total_energy(State.rest(sys2), sys2, UNI2) == 0.0

    def test_gap_open(self, sys2):
        e = total_energy(State.released(sys2, 1, 0.4), sys2, UNI2)
        assert e == pytest.approx(0.5 * sys2.K[0, 0] * 0.16, rel=1e-14)
        assert e == pytest.approx(132887.2, rel=2e-4)

    def test_bilateral_adds_spring_energy(self, sys2):
        s = State.released(sys2, 1, 0.4)
        diff = total_energy(s, sys2, BIL2) - total_energy(s, sys2, UNI2)
        assert diff == pytest.approx(80000.0, rel=1e-12)

    def test_rejects_excitation(self, sys2):
        with pytest.raises(ValueError):
            total_energy(State.rest(sys2), sys2, UNI2, Excitation())

    @pytest.mark.parametrize("spring", [UNI2, BIL2], ids=["unilateral", "bilateral"])
    def test_conserved_two_elements(self, sys2, spring):
        ts = integrate(sys2, spring, OFF, State.released(sys2, 1, 0.4), 0.1, output_every=100)
        E = energy_history(ts, sys2, spring)
        assert np.max(np.abs(E / E[0] - 1)) < 1e-4


class TestIntegrate:
    def test_rest_stays_at_rest(self, sys10):
        spring = SpringConfig.at_middle(10, 1e6, SpringMode.UNILATERAL)
        ts = integrate(sys10, spring, OFF, State.rest(sys10), 0.01, output_every=100)
        assert not np.any(ts.q) and not np.any(ts.v) and not np.any(ts.acc)

    def test_two_phase_motion_matches_closed_form(self, sys2):
        ts = integrate(sys2, UNI2, OFF, State.released(sys2, 1, 0.4), 0.1, output_every=10)
        exact = two_phase_exact(ts.t, 0.4, sys2.M[0, 0], sys2.K[0, 0], 1e6)
        assert np.max(np.abs(ts.q[:, 0] - exact)) < 1e-5 * 0.4
        assert not np.any(ts.q[:, 1])

    def test_bilateral_first_mode_is_harmonic(self, sys10):
        spring = SpringConfig.at_middle(10, 1e6, SpringMode.BILATERAL)
        modes = eigenfrequencies(sys10, 1, spring)
        phi = modes.vectors[:, 0] * (0.01 / np.abs(modes.vectors[:, 0]).max())
        w = math.sqrt(modes.eigenvalues[0])
        ts = integrate(sys10, spring, OFF, State(0.0, phi, np.zeros(18)), 0.01, dt=1e-6, output_every=50)
        exact = np.outer(np.cos(w * ts.t), phi)
        assert np.max(np.abs(ts.q - exact)) < 1e-9 * 0.01

    def test_bilateral_linearity(self, sys2):
        ic = State.released(sys2, 1, 0.4)
        a = integrate(sys2, BIL2, OFF, ic, 0.01, output_every=50)
        b = integrate(sys2, BIL2, OFF, ic.scaled(3.0), 0.01, output_every=50)
        np.testing.assert_allclose(b.q, 3.0 * a.q, rtol=1e-12, atol=1e-14)

    @settings(max_examples=10, deadline=None)
    @given(alpha=st.floats(0.01, 100.0))
    def test_unilateral_positive_homogeneity(self, sys2, alpha):
        ic = State.released(sys2, 1, 0.4)
        a = integrate(sys2, UNI2, OFF, ic, 0.01, output_every=50)
        b = integrate(sys2, UNI2, OFF, ic.scaled(alpha), 0.01, output_every=50)
        np.testing.assert_allclose(b.q, alpha * a.q, rtol=1e-9, atol=1e-12 * alpha)

    def test_gap_closed_runs_coincide(self, sys2):
        ic = State.released(sys2, 1, -0.4)
        bil = integrate(sys2, BIL2, OFF, ic, 5e-4, output_every=10)
        assert np.all(-bil.q[:, 0] >= 0)
        uni = integrate(sys2, UNI2, OFF, ic, 5e-4, output_every=10)
        np.testing.assert_allclose(uni.q, bil.q, rtol=1e-13, atol=0)

    def test_zero_stiffness_blocks_forcing(self, sys2):
        spring = SpringConfig(k_r=0.0, node=1, mode=SpringMode.BILATERAL)
        ts = integrate(sys2, spring, Excitation(a=50.0, f=500.0), State.rest(sys2), 0.01)
        assert not np.any(ts.q)

    def test_accelerations_satisfy_equations_of_motion(self, sys2):
        exc = Excitation(a=50.0, f=500.0)
        ts = integrate(sys2, UNI2, exc, State.rest(sys2), 0.01, output_every=97)
        for k in range(0, ts.n_samples, 7):
            _, dv = rhs(ts.state(k), sys2, UNI2, exc)
            np.testing.assert_allclose(ts.acc[k], dv, rtol=1e-9, atol=1e-9 * np.abs(ts.acc).max())

    def test_sampling_grid(self, sys2):
        ts = integrate(sys2, UNI2, OFF, State.released(sys2, 1, 0.4), 0.001, dt=1e-6, output_every=10)
        assert ts.n_samples == 101
        assert ts.dt == pytest.approx(1e-5)
        np.testing.assert_allclose(np.diff(ts.t), 1e-5, rtol=1e-9)
        assert ts.metadata["spring_mode"] == "unilateral"

    def test_default_dt(self, sys2, sys10):
        assert default_dt(sys2, UNI2) == 2.0**-20
        dt = default_dt(sys10, SpringConfig.at_middle(10))
        assert dt <= 1e-6 and math.log2(dt).is_integer()

    def test_rejects_unstable_step(self, sys2):
        bound = stability_limit(sys2, UNI2)
        with pytest.raises(StabilityError) as info:
            integrate(sys2, UNI2, OFF, State.rest(sys2), 0.01, dt=1.01 * bound)
        assert info.value.bound == pytest.approx(bound)
        integrate(sys2, UNI2, OFF, State.released(sys2, 1, 0.4), 0.01, dt=0.99 * bound)

    def test_divergence_reports_time(self, sys2):
        ic = State(0.0, np.array([1e305, 0.0]), np.zeros(2))
        with pytest.raises(DivergenceError) as info:
            integrate(sys2, UNI2, OFF, ic, 0.01, dt=1e-6)
        assert info.value.time == pytest.approx(1e-6)

    def test_rejects_bad_inputs(self, sys2, sys10):
        with pytest.raises(ValueError):
            integrate(sys2, UNI2, OFF, State.rest(sys10), 0.01)
        with pytest.raises(ValueError):
            integrate(sys2, SpringConfig(node=2), OFF, State.rest(sys2), 0.01)
        with pytest.raises(ValueError):
            integrate(sys2, UNI2, OFF, State.rest(sys2), 0.01, dt=0.0)

    def test_dt_halving_converges(self, sys2):
        ic = State.released(sys2, 1, 0.4)
        a = integrate(sys2, UNI2, OFF, ic, 0.1, dt=1e-6, output_every=100000).final_state()
        b = integrate(sys2, UNI2, OFF, ic, 0.1, dt=5e-7, output_every=200000).final_state()
        ya, yb = np.r_[a.q, a.v], np.r_[b.q, b.v]
        assert np.linalg.norm(ya - yb) / np.linalg.norm(yb) < 1e-6
