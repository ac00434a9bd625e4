"""Physical constants (exact SI 2019 values) and the unit bridges the package needs.

Angular frequency in rad/s is the canonical spectral unit everywhere inside
the package; wavelengths and wavenumbers are converted at the boundary.
"""

import math

from .exceptions import DomainError

h = 6.62607015e-34
"""Planck constant, J s."""
hbar = h / (2 * math.pi)
"""Reduced Planck constant, J s."""
k_B = 1.380649e-23
"""Boltzmann constant, J/K."""
c = 2.99792458e8
"""Speed of light in vacuum, m/s."""

WIEN_B = 2.897771955e-3
"""Wien displacement constant for the per-wavelength peak, m K."""


def _check_positive(value, name):
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def wavelength_to_omega(wavelength):
    """Angular frequency (rad/s) of light with vacuum wavelength ``wavelength`` (m)."""
    wavelength = _check_positive(wavelength, "wavelength")
    return 2 * math.pi * c / wavelength


def omega_to_wavelength(omega):
    """Vacuum wavelength (m) for angular frequency ``omega`` (rad/s)."""
    omega = _check_positive(omega, "omega")
    return 2 * math.pi * c / omega


def wavenumber_to_omega(wavenumber):
    """Angular frequency for a wavenumber given in m^-1."""
    wavenumber = _check_positive(wavenumber, "wavenumber")
    return 2 * math.pi * c * wavenumber


def omega_to_wavenumber(omega):
    """Wavenumber in m^-1 for angular frequency ``omega``."""
    omega = _check_positive(omega, "omega")
    return omega / (2 * math.pi * c)


def wavenumber_band_to_wavelengths(band):
    """Convert a ``(low, high)`` wavenumber band in cm^-1 to wavelengths in m.

    Returns ``(short, long)``: the high wavenumber edge maps to the short
    wavelength.
    """
    low, high = (float(v) for v in band)
    _check_positive(low, "band lower edge")
    _check_positive(high, "band upper edge")
    if not low < high:
        raise DomainError(f"wavenumber band must satisfy low < high, got ({low}, {high})")
    return 0.01 / high, 0.01 / low


class SpectralPoint:
    """A single optical frequency, stored as angular frequency."""

    __slots__ = ("omega",)

    def __init__(self, omega):
        self.omega = _check_positive(omega, "omega")

    @classmethod
    def from_wavelength(cls, wavelength):
        return cls(wavelength_to_omega(wavelength))

    @classmethod
    def from_wavenumber_cm(cls, wavenumber):
        return cls(wavenumber_to_omega(100.0 * _check_positive(wavenumber, "wavenumber")))

    @property
    def wavelength(self):
        return omega_to_wavelength(self.omega)

    @property
    def wavenumber(self):
        """Wavenumber in m^-1."""
        return omega_to_wavenumber(self.omega)

    def __eq__(self, other):
        return isinstance(other, SpectralPoint) and other.omega == self.omega

    def __hash__(self):
        return hash(self.omega)

    def __repr__(self):
        return f"SpectralPoint(omega={self.omega!r})"
