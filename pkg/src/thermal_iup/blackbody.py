"""Black-body occupation numbers, energy density and detector background."""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import constants as const
from .constants import SpectralPoint
from .exceptions import DomainError

# exp() overflows a double just above 709; beyond this the occupation is reported as exactly 0.
OVERFLOW_EXPONENT = 700.0


@dataclass(frozen=True)
class ThermalEnvironment:
    """A radiation mode at one frequency in equilibrium at ``temperature`` kelvin."""

    spectral: SpectralPoint
    temperature: float

    def __post_init__(self):
        t = float(self.temperature)
        if not math.isfinite(t) or t <= 0:
            raise DomainError(f"temperature must be positive, got {self.temperature!r}")
        object.__setattr__(self, "temperature", t)

    @classmethod
    def from_wavelength(cls, wavelength, temperature):
        return cls(SpectralPoint.from_wavelength(wavelength), temperature)

    @classmethod
    def from_omega(cls, omega, temperature):
        return cls(SpectralPoint(omega), temperature)

    @property
    def omega(self):
        return self.spectral.omega


def occupation(omega, temperature):
    """Bose-Einstein mean occupation 1/(exp(hbar*omega/k_B*T) - 1).

    ``temperature == 0`` is accepted as the vacuum limit and returns 0.
    """
    omega = float(omega)
    temperature = float(temperature)
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    if not math.isfinite(temperature) or temperature < 0:
        raise DomainError(f"temperature must be non-negative, got {temperature!r}")
    if temperature == 0:
        return 0.0
    x = const.hbar * omega / (const.k_B * temperature)
    if x > OVERFLOW_EXPONENT:
        return 0.0
    return 1.0 / math.expm1(x)


def mean_occupation(env):
    """Mean photon number of the thermal mode described by ``env``."""
    return occupation(env.omega, env.temperature)


def bose_einstein_pmf(n_th, n):
    """Probability of ``n`` photons in a thermal mode of mean occupation ``n_th``.

    Uses the geometric form n_th**n / (n_th + 1)**(n + 1). ``n`` may be an
    integer or an integer array.
    """
    n_th = float(n_th)
    if not math.isfinite(n_th) or n_th < 0:
        raise DomainError(f"n_th must be non-negative, got {n_th!r}")
    n_arr = np.asarray(n)
    if n_arr.dtype.kind not in "iu" or np.any(n_arr < 0):
        raise DomainError("photon number index must be a non-negative integer")
    if n_th == 0:
        p = (n_arr == 0).astype(float)
    else:
        ratio = n_th / (n_th + 1.0)
        p = ratio ** n_arr.astype(float) / (n_th + 1.0)
    return float(p) if p.ndim == 0 else p


def mode_density(omega):
    """Density of plane-wave modes per unit angular frequency and volume, omega^2 / (pi^2 c^3)."""
    return omega**2 / (math.pi**2 * const.c**3)


def planck_energy_density(env):
    """Spectral energy density per unit angular frequency, J s / m^3."""
    omega = env.omega
    return mean_occupation(env) * const.hbar * omega * mode_density(omega)


def _energy_density_array(omega, temperature):
    x = const.hbar * omega / (const.k_B * temperature)
    n = np.where(x > OVERFLOW_EXPONENT, 0.0, 1.0 / np.expm1(np.minimum(x, OVERFLOW_EXPONENT)))
    return n * const.hbar * omega**3 / (math.pi**2 * const.c**3)


def spectral_radiance(omega, temperature):
    """Black-body radiance per unit angular frequency, W / (m^2 sr rad/s).

    Radiance is energy density times c / (4 pi). Accepts array ``omega``.
    """
    return _energy_density_array(np.asarray(omega, dtype=float), float(temperature)) * const.c / (4 * math.pi)


def wien_peak_wavelength(temperature):
    """Wavelength of peak spectral radiance per unit wavelength."""
    temperature = float(temperature)
    if not math.isfinite(temperature) or temperature <= 0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    return const.WIEN_B / temperature


class BandBackground(NamedTuple):
    power: float
    """Incident power in W."""
    photon_flux: float
    """Incident photons per second."""


def detector_band_background(temperature, band, area):
    """Thermal power and photon flux on a flat detector viewing a hemisphere.

    The background is a unity-emissivity Lambertian black body at
    ``temperature``; the detector of ``area`` (m^2) collects with etendue
    pi * area. ``band`` is a ``(low, high)`` wavenumber range in cm^-1.
    """
    temperature = float(temperature)
    if not math.isfinite(temperature) or temperature <= 0:
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    area = float(area)
    if not math.isfinite(area) or area <= 0:
        raise DomainError(f"area must be positive, got {area!r}")
    short, long = const.wavenumber_band_to_wavelengths(band)
    w_lo = const.wavelength_to_omega(long)
    w_hi = const.wavelength_to_omega(short)

    def radiance(w):
        return float(spectral_radiance(w, temperature))

    def photon_radiance(w):
        return radiance(w) / (const.hbar * w)

    power, _ = integrate.quad(radiance, w_lo, w_hi, epsabs=0.0, epsrel=1e-10)
    flux, _ = integrate.quad(photon_radiance, w_lo, w_hi, epsabs=0.0, epsrel=1e-10)
    etendue = math.pi * area
    return BandBackground(power * etendue, flux * etendue)
