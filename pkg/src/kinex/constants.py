"""Physical constants in the working units of this package.

Energies are in meV, temperatures in K, frequencies in rad/s unless a
function says otherwise. Geometry is in nm/um, inductance in pH,
capacitance in fF, currents in uA.
"""

import scipy.constants as _const

K_B = _const.k / _const.e * 1e3        # Boltzmann constant [meV/K]
HBAR = _const.hbar / _const.e * 1e3    # reduced Planck constant [meV*s]
PHI0 = _const.h / (2.0 * _const.e)     # superconducting flux quantum [Wb]

# Weak-coupling BCS ratio Delta(0) = 1.764 k_B T_c
BCS_GAP_RATIO = 1.764

# Clamp for the BCS coherence-peak divergence at |E| = Delta, Gamma = 0
DOS_CLAMP = 1e8
