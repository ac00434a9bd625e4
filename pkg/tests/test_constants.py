import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermal_iup import constants as const
from thermal_iup.constants import SpectralPoint
from thermal_iup.exceptions import DomainError


def test_exact_si_values():
    assert const.h == 6.62607015e-34
    assert const.k_B == 1.380649e-23
    assert const.c == 2.99792458e8
    assert const.hbar == pytest.approx(const.h / (2 * math.pi), rel=1e-15)


# 40-digit mpmath evaluation of 2 pi c / lambda
@pytest.mark.parametrize(
    "wavelength, omega",
    [(1e-6, 1.883651567308853277e15), (8e-6, 2.354564459136066597e14)],
)
def test_wavelength_to_omega(wavelength, omega):
    assert const.wavelength_to_omega(wavelength) == pytest.approx(omega, rel=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1e-6, math.inf, math.nan])
def test_wavelength_to_omega_rejects(bad):
    with pytest.raises(DomainError):
        const.wavelength_to_omega(bad)


def test_band_to_wavelengths():
    short, long = const.wavenumber_band_to_wavelengths((1176, 1234))
    assert short == pytest.approx(8.103727714748784e-06, rel=1e-14)
    assert long == pytest.approx(8.503401360544218e-06, rel=1e-14)
    assert short < long


@pytest.mark.parametrize("band", [(1000, 1000), (1250, 1176), (0, 10), (-5, 10)])
def test_band_rejects(band):
    with pytest.raises(DomainError):
        const.wavenumber_band_to_wavelengths(band)


positive = st.floats(min_value=1e-12, max_value=1e3, allow_nan=False, allow_infinity=False)


@given(positive)
def test_wavelength_round_trip(wavelength):
    back = const.omega_to_wavelength(const.wavelength_to_omega(wavelength))
    assert back == pytest.approx(wavelength, rel=1e-12)


@given(positive)
def test_wavenumber_round_trip(wavenumber):
    back = const.omega_to_wavenumber(const.wavenumber_to_omega(wavenumber))
    assert back == pytest.approx(wavenumber, rel=1e-12)


def test_spectral_point_views():
    p = SpectralPoint.from_wavelength(8e-6)
    assert p.wavelength * p.omega == pytest.approx(2 * math.pi * const.c, rel=1e-14)
    assert p.wavenumber == pytest.approx(1 / p.wavelength, rel=1e-14)
    assert SpectralPoint.from_wavenumber_cm(1250).wavelength == pytest.approx(8e-6, rel=1e-14)
    with pytest.raises(DomainError):
        SpectralPoint(-1.0)
