"""Transmon design relations and exact charge-basis spectra.

The Hamiltonian 4 E_C (n - n_g)^2 - E_J cos(phi) is tridiagonal in the charge
basis; its low eigenvalues are obtained with LAPACK's tridiagonal solver.
All spectra are returned as cyclic frequencies in GHz.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .constants import E_CHARGE, H_UEV_PER_GHZ, R_Q, R_Q_KOHM, energy_uev_to_freq_ghz
from .errors import DomainError

DEFAULT_N_CUT = 30
DEFAULT_NG_POINTS = 41


def _check_ratio(r):
    if not r > 0.125:
        raise DomainError("E_J/E_C ratio must exceed 1/8")


def rn_for_target(r, nu01, nu_gap):
    """Junction normal-state resistance (kOhm) for ratio ``r`` and target nu01.

    R_N = (R_Q/2) ((sqrt(8r) - 1)/r) (nu_gap/nu01).
    """
    _check_ratio(r)
    if not (nu01 > 0 and nu_gap > 0):
        raise DomainError("frequencies must be positive")
    return 0.5 * R_Q_KOHM * (math.sqrt(8.0 * r) - 1.0) / r * nu_gap / nu01


def csigma_for_target(r, nu01):
    """Total shunt capacitance in fF for ratio ``r`` and target nu01 (GHz)."""
    _check_ratio(r)
    if not nu01 > 0:
        raise DomainError("nu01 must be positive")
    return (math.sqrt(8.0 * r) - 1.0) / 8.0 / (R_Q * nu01 * 1e9) * 1e15


def charging_energy(c_sigma):
    """E_C = e^2 / 2 C_sigma in ueV for ``c_sigma`` in fF."""
    if not c_sigma > 0:
        raise DomainError("capacitance must be positive")
    return E_CHARGE / (2.0 * c_sigma * 1e-15) * 1e6


def josephson_energy_from_rn(rn, nu_gap):
    """E_J in ueV from R_N (kOhm) and the gap frequency, E_J = h nu_gap R_Q / (2 R_N)."""
    return H_UEV_PER_GHZ * nu_gap * R_Q_KOHM / (2.0 * rn)


def cg_for_chi(r, delta0, nu0_rms, chi_over_2pi, nu_c):
    """Coupling-to-total capacitance ratio C_g/C_sigma for a target dispersive shift.

    All frequencies in GHz. ``chi_over_2pi`` is the cyclic shift; the angular
    chi of the design relation divided by 2 pi nu_C is therefore
    ``chi_over_2pi / nu_c``.
    """
    _check_ratio(r)
    if not (delta0 > 0 and nu0_rms > 0 and nu_c > 0):
        raise DomainError("frequencies must be positive")
    if chi_over_2pi < 0:
        raise DomainError("chi must be non-negative")
    if not delta0 > nu_c:
        raise DomainError("delta0 must exceed nu_C (straddling regime is singular)")
    return (
        (2.0 / r) ** 0.25
        * (delta0 / nu0_rms)
        * math.sqrt(chi_over_2pi / nu_c)
        * math.sqrt(1.0 - nu_c / delta0)
    )


@dataclass(frozen=True)
class TransmonDesign:
    r: float
    nu01_max: float  # GHz
    nu_gap: float  # GHz
    r_n: float  # kOhm
    c_sigma: float  # fF
    c_g: float  # fF
    e_j_max: float  # ueV
    e_c: float  # ueV
    nu_c: float  # GHz

    def __post_init__(self):
        if not (0 < self.c_g < self.c_sigma and self.r_n > 0):
            raise DomainError("require 0 < C_g < C_sigma and R_N > 0")


def design_transmon(r, nu01, nu_gap, delta0, nu0_rms, chi_over_2pi):
    """Invert the design relations into fabrication targets.

    ``nu0_rms`` and ``chi_over_2pi`` in GHz, like the other frequencies.
    """
    c_sigma = csigma_for_target(r, nu01)
    e_c = charging_energy(c_sigma)
    nu_c = energy_uev_to_freq_ghz(e_c)
    ratio = cg_for_chi(r, delta0, nu0_rms, chi_over_2pi, nu_c)
    return TransmonDesign(
        r=r,
        nu01_max=nu01,
        nu_gap=nu_gap,
        r_n=rn_for_target(r, nu01, nu_gap),
        c_sigma=c_sigma,
        c_g=ratio * c_sigma,
        e_j_max=r * e_c,
        e_c=e_c,
        nu_c=nu_c,
    )


def diagonalize(e_j, e_c, n_g=0.0, n_cut=DEFAULT_N_CUT, levels=6):
    """Lowest ``levels`` eigenfrequencies (GHz) relative to the ground level.

    Energies ``e_j`` and ``e_c`` are in ueV.
    """
    if not (e_j >= 0 and e_c > 0):
        raise DomainError("require E_J >= 0 and E_C > 0")
    if n_cut < 5:
        raise DomainError("n_cut must be at least 5")
    dim = 2 * n_cut + 1
    if levels > dim - 2:
        raise DomainError(
            f"{levels} levels requested from a {dim}-state basis; increase n_cut"
        )
    ej = energy_uev_to_freq_ghz(e_j)
    ec = energy_uev_to_freq_ghz(e_c)
    n = np.arange(-n_cut, n_cut + 1, dtype=float)
    diag = 4.0 * ec * (n - n_g) ** 2
    off = np.full(dim - 1, -0.5 * ej)
    w = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, levels - 1))
    return w - w[0]


@dataclass
class TransmonSpectrum:
    """Charge-basis levels over an offset-charge grid.

    ``levels[m, k]`` is level m (GHz, relative to ground) at ``n_g[k]``.
    ``dispersion_01`` is the peak-to-peak nu01 variation in MHz.
    """

    n_g: np.ndarray
    levels: np.ndarray
    nu01: float
    nu12: float
    anharmonicity: float
    dispersion_01: float


def transmon_spectrum(e_j, e_c, n_g=None, n_cut=DEFAULT_N_CUT, levels=4):
    """Spectrum over ``n_g`` (default 41 points on [0, 0.5]).

    The scalar nu01, nu12 and anharmonicity are quoted at n_g = 0.5
    (mid-point of the charge band); the dispersion spans the full grid.
    """
    if n_g is None:
        n_g = np.linspace(0.0, 0.5, DEFAULT_NG_POINTS)
    n_g = np.atleast_1d(np.asarray(n_g, dtype=float))
    table = np.column_stack([diagonalize(e_j, e_c, ng, n_cut, levels) for ng in n_g])
    mid = diagonalize(e_j, e_c, 0.5, n_cut, max(levels, 3))
    nu01 = mid[1] - mid[0]
    nu12 = mid[2] - mid[1]
    return TransmonSpectrum(
        n_g=n_g,
        levels=table,
        nu01=float(nu01),
        nu12=float(nu12),
        anharmonicity=float(nu12 - nu01),
        dispersion_01=float(np.ptp(table[1] - table[0]) * 1e3),
    )


def charge_dispersion(e_j, e_c, level=0, n_cut=DEFAULT_N_CUT, ng_points=DEFAULT_NG_POINTS):
    """Peak-to-peak spread (MHz) over n_g in [0, 0.5] of transition ``level -> level+1``.

    ``level=0`` gives the nu01 dispersion.
    """
    if ng_points < 21:
        raise DomainError("use at least 21 offset-charge points")
    grid = np.linspace(0.0, 0.5, ng_points)
    freqs = np.array([np.diff(diagonalize(e_j, e_c, ng, n_cut, level + 2))[level] for ng in grid])
    return float(np.ptp(freqs) * 1e3)


def perturbative_nu01(e_j, e_c):
    """sqrt(8 E_J E_C) - E_C expressed in GHz."""
    return energy_uev_to_freq_ghz(math.sqrt(8.0 * e_j * e_c) - e_c)
