"""Physical constants and the fixed unit conversions used across the package.

Internal units: GHz (frequency), ns (time), fF (capacitance), kOhm
(resistance), uV (voltage), ueV (energy). Energies are carried as cyclic
frequencies wherever possible.
"""

import math

from scipy import constants as _c

H = _c.h  # J s
H_EV = _c.h / _c.e  # eV s
E_CHARGE = _c.e  # C

#: resistance quantum h / 4e^2 in Ohm
R_Q = H / (4.0 * E_CHARGE**2)
#: flux quantum h / 2e in Wb
PHI_0 = H / (2.0 * E_CHARGE)

#: Planck constant in ueV / GHz (equivalently ueV ns)
H_UEV_PER_GHZ = H_EV * 1e6 * 1e9

R_Q_KOHM = R_Q * 1e-3

TWO_PI = 2.0 * math.pi


def energy_uev_to_freq_ghz(energy_uev):
    """Convert an energy in ueV to the cyclic frequency E/h in GHz."""
    return energy_uev / H_UEV_PER_GHZ


def freq_ghz_to_energy_uev(freq_ghz):
    """Convert a cyclic frequency in GHz to the energy h*f in ueV."""
    return freq_ghz * H_UEV_PER_GHZ


def voltage_uv_to_freq_mhz(voltage_uv):
    """Frequency eV/h in MHz for a voltage in uV."""
    return voltage_uv * 1e-6 / H_EV * 1e-6


def freq_mhz_to_voltage_uv(freq_mhz):
    """Voltage h*f/e in uV for a frequency in MHz."""
    return freq_mhz * 1e6 * H_EV * 1e6
