"""Finite-element vibration of a clamped beam with a bilateral or unilateral spring."""
from .dynamics import (
    DivergenceError,
    StabilityError,
    State,
    TimeSeries,
    integrate,
    rhs,
    total_energy,
    two_phase_frequency,
)
from .fem import BeamProperties, DofMap, Mesh, SystemMatrices, assemble, element_mass, element_stiffness
from .modal import AnalyticModeConstants, ModalResult, analytic_frequencies, eigenfrequencies
from .spectrum import Peak, Spectrum, fft_amplitude, find_peaks
from .springs import Excitation, SpringConfig, SpringMode, positive_part, spring_force
from .sweep import SweepConfig, SweepResult, argmax_frequency, run_sweep

__version__ = "0.1.0"
