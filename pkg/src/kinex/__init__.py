"""Microwave electrodynamics of disordered superconducting nanowires.

Forward simulation of segmented kinetic-inductance transmission lines under
bias current, temperature, and magnetic field, and the inverse pipeline
recovering resonance parameters, nonlinearity coefficients, depairing
currents, and effective disorder broadening from complex spectra.
"""

from .material import (
    ComplexConductivity,
    MaterialState,
    dynes_dos,
    gap_at_temperature,
    mb_conductivity,
    sheet_kinetic_inductance,
)

__version__ = "0.1.0"
