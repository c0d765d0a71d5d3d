"""Qubit-resonator coupling: flux tuning, dressed states, dispersive shift,
spectroscopic inversion and Purcell-limited lifetime.

Frequencies are GHz unless a name says otherwise; ``g`` and ``chi`` are the
cyclic values g/2pi and chi/2pi in MHz, ``kappa`` is kappa/2pi in MHz and
lifetimes are in us.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import H_UEV_PER_GHZ
from .errors import (
    DispersiveApproximationWarning,
    DomainError,
    InversionError,
    ResonantLimitWarning,
)


def ej_at_flux(e_j_max, flux, flux_offset=0.0):
    """Effective Josephson energy E_J_max |cos(pi (flux - offset))| of a symmetric SQUID."""
    return e_j_max * np.abs(np.cos(np.pi * (np.asarray(flux) - flux_offset)))


def nu01_from_energies(nu_j, nu_c):
    """Transmon transition frequency sqrt(8 nu_J nu_C) - nu_C (GHz)."""
    return np.sqrt(8.0 * np.asarray(nu_j) * nu_c) - nu_c


def dispersive_shift(g, delta0, nu_c, kappa=None):
    """chi/2pi in MHz: (g/2pi)^2 nu_C / (Delta0 (Delta0 - nu_C)).

    A :class:`DispersiveApproximationWarning` is emitted when ``delta0`` lies
    within 10 max(kappa, |chi|) of either pole (0 or nu_C).
    """
    if delta0 == 0 or delta0 == nu_c:
        raise DomainError("dispersive shift is singular at delta0 = 0 and delta0 = nu_C")
    g_ghz = g * 1e-3
    chi = g_ghz**2 * nu_c / (delta0 * (delta0 - nu_c)) * 1e3
    width = max(abs(chi), kappa or 0.0) * 1e-3
    if min(abs(delta0), abs(delta0 - nu_c)) < 10.0 * width:
        warnings.warn(
            f"delta0 = {delta0} GHz is within 10 linewidths of a pole; "
            "dispersive approximation invalid",
            DispersiveApproximationWarning,
            stacklevel=2,
        )
    return chi


def nu_c_from_chi(chi, delta0, g):
    """Charging frequency nu_C (GHz) from a measured chi/2pi, Delta0 and g/2pi.

    nu_C = chi Delta0^2 / (g^2 + chi Delta0), everything as cyclic frequency.
    This is the exact algebraic inverse of :func:`dispersive_shift`.
    """
    chi_ghz = chi * 1e-3
    g_ghz = g * 1e-3
    denom = g_ghz**2 + chi_ghz * delta0
    if denom == 0:
        raise InversionError("g^2 + chi delta0 vanishes")
    nu_c = chi_ghz * delta0**2 / denom
    if not nu_c > 0:
        raise InversionError(f"non-physical charging frequency {nu_c} GHz")
    return nu_c


def ej_from_spectroscopy(nu01, nu_c):
    """Josephson energy from the measured nu01 and nu_C.

    Returns ``(e_j_ueV, nu_j_GHz)`` with nu_J = (nu01 + nu_C)^2 / (8 nu_C),
    the inverse of nu01 = sqrt(8 nu_J nu_C) - nu_C.
    """
    if not (nu01 > 0 and nu_c > 0):
        raise DomainError("frequencies must be positive")
    nu_j = (nu01 + nu_c) ** 2 / (8.0 * nu_c)
    return nu_j * H_UEV_PER_GHZ, nu_j


def dressed_levels(nu01, f_r, g):
    """One-excitation Jaynes-Cummings branches (lower, upper) in GHz.

    Works elementwise on arrays of ``nu01``/``f_r``.
    """
    if not g > 0:
        if g == 0:
            lo = np.minimum(nu01, f_r)
            hi = np.maximum(nu01, f_r)
            return lo, hi
        raise DomainError("g must be non-negative")
    nu01 = np.asarray(nu01, dtype=float)
    mean = 0.5 * (nu01 + f_r)
    half = 0.5 * np.sqrt((nu01 - f_r) ** 2 + (2.0 * g * 1e-3) ** 2)
    return mean - half, mean + half


def anticrossing_sweep(flux, nu_j_max, nu_c, f_r, g, flux_offset=0.0):
    """Flux sweep of the coupled spectrum.

    Returns a dict of arrays: ``flux``, ``lower``, ``upper``, ``bare_qubit``,
    ``bare_resonator`` (GHz).
    """
    flux = np.asarray(flux, dtype=float)
    nu_j = ej_at_flux(nu_j_max, flux, flux_offset)
    bare = nu01_from_energies(nu_j, nu_c)
    lower, upper = dressed_levels(bare, f_r, g)
    return {
        "flux": flux,
        "lower": lower,
        "upper": upper,
        "bare_qubit": bare,
        "bare_resonator": np.full_like(flux, f_r),
    }


def anticrossing_flux(nu_j_max, nu_c, f_r, flux_offset=0.0):
    """Flux (in Phi0, first lobe) at which the bare qubit meets the resonator."""
    nu_j = (f_r + nu_c) ** 2 / (8.0 * nu_c)
    ratio = nu_j / nu_j_max
    if not 0 <= ratio <= 1:
        raise DomainError("resonator frequency is outside the qubit tuning range")
    return math.acos(ratio) / math.pi + flux_offset


def purcell_rate(kappa, g, delta0):
    """Purcell decay rate 2 pi kappa (g/Delta0)^2 in 1/us."""
    return 2.0 * math.pi * kappa * (g * 1e-3 / delta0) ** 2


def purcell_t1(kappa, g, delta0, t1_intrinsic):
    """Total qubit T1 (us) including Purcell emission through the resonator.

    At ``delta0 == 0`` the qubit is hybridised with the resonator and the
    resonant limit 1/T1 = 1/T1_int + kappa_angular/2 is returned together with
    a :class:`ResonantLimitWarning`.
    """
    if not (kappa >= 0 and t1_intrinsic > 0):
        raise DomainError("kappa must be >= 0 and T1 positive")
    if delta0 == 0:
        warnings.warn("zero detuning: resonant limit T1 -> 2/kappa", ResonantLimitWarning, stacklevel=2)
        gamma = math.pi * kappa
    else:
        gamma = purcell_rate(kappa, g, delta0)
    return 1.0 / (1.0 / t1_intrinsic + gamma)


@dataclass(frozen=True)
class CoupledSystem:
    """Qubit-resonator operating point. ``delta0`` is derived from nu01 - f_r."""

    g_over_2pi: float  # MHz
    f_r: float  # GHz
    nu01: float  # GHz
    nu_c: float  # GHz
    kappa_over_2pi: float = 1.4  # MHz
    flux: float = 0.0

    @property
    def delta0(self):
        return self.nu01 - self.f_r

    @property
    def chi_over_2pi(self):
        return dispersive_shift(self.g_over_2pi, self.delta0, self.nu_c, self.kappa_over_2pi)

    def dressed(self):
        return dressed_levels(self.nu01, self.f_r, self.g_over_2pi)

    @classmethod
    def at_flux(cls, flux, nu_j_max, nu_c, f_r, g, kappa=1.4, flux_offset=0.0):
        nu_j = float(ej_at_flux(nu_j_max, flux, flux_offset))
        return cls(
            g_over_2pi=g,
            f_r=f_r,
            nu01=float(nu01_from_energies(nu_j, nu_c)),
            nu_c=nu_c,
            kappa_over_2pi=kappa,
            flux=flux,
        )
