"""Parsing of unit-suffixed command-line quantities into SI values."""

import math
import re

from .exceptions import DomainError

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_QUANTITY = re.compile(rf"^\s*({_NUMBER})?\s*([^\s\d.+-][^\s]*)?\s*$")

LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "micron": 1e-6, "nm": 1e-9}
AREA = {"m2": 1.0, "cm2": 1e-4, "mm2": 1e-6, "um2": 1e-12, "µm2": 1e-12}
TEMPERATURE = {"K": 1.0}
WAVENUMBER = {"cm-1": 1.0, "/cm": 1.0}
ANGULAR_FREQUENCY = {"rad/s": 1.0}
ANGLE = {"rad": 1.0, "pi": math.pi, "deg": math.pi / 180}


def _split(text):
    m = _QUANTITY.match(str(text).replace("^", ""))
    if not m or (m.group(1) is None and m.group(2) is None):
        raise DomainError(f"cannot parse quantity {text!r}")
    return m.group(1), m.group(2)


def parse_quantity(text, units, what):
    """Parse ``text`` such as ``8um`` with a table mapping unit suffix to SI factor.

    Bare numbers are rejected: every dimensioned value must name its unit.
    """
    number, unit = _split(text)
    if unit is None:
        raise DomainError(f"{what} {text!r} needs a unit suffix (one of {', '.join(units)})")
    if unit not in units:
        raise DomainError(f"{what} {text!r}: unknown unit {unit!r} (expected one of {', '.join(units)})")
    if number is None:
        if unit != "pi":
            raise DomainError(f"{what} {text!r} has no numeric value")
        number = "1"
    value = float(number) * units[unit]
    if not math.isfinite(value):
        raise DomainError(f"{what} {text!r} is not finite")
    return value


def parse_length(text):
    return parse_quantity(text, LENGTH, "length")


def parse_area(text):
    return parse_quantity(text, AREA, "area")


def parse_temperature(text):
    return parse_quantity(text, TEMPERATURE, "temperature")


def parse_wavenumber(text):
    """Wavenumber in cm^-1 (the returned value stays in cm^-1)."""
    return parse_quantity(text, WAVENUMBER, "wavenumber")


def parse_omega(text):
    return parse_quantity(text, ANGULAR_FREQUENCY, "angular frequency")


def parse_angle(text):
    """Angle in radians; accepts ``0.05pi``, ``pi``, ``0.3rad``, ``45deg`` and a bare ``0``."""
    number, unit = _split(text)
    if unit is None and number is not None and float(number) == 0.0:
        return 0.0
    return parse_quantity(text, ANGLE, "angle")


def parse_number(text):
    """Dimensionless value; unit suffixes are rejected."""
    number, unit = _split(text)
    if unit is not None or number is None:
        raise DomainError(f"expected a plain number, got {text!r}")
    return float(number)


def parse_band(text):
    """``LOW:HIGH`` wavenumber band, each edge with its unit, e.g. ``1176cm-1:1234cm-1``."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise DomainError(f"band {text!r} must look like LOWcm-1:HIGHcm-1")
    return parse_wavenumber(parts[0]), parse_wavenumber(parts[1])
