"""Closed-form visible-mode photon number and fringe visibility.

The interferometer is: thermal idler ``i`` and vacuum visible mode ``v``
through a first crystal, a phase shift on ``i``, a beam splitter mixing
``i`` with a second thermal idler ``i'``, then a second crystal with the
same gain acting on ``i`` and ``v``.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .exceptions import DomainError

LOW_GAIN_LIMIT = 0.2
HALF_PI = math.pi / 2


class LowGainWarning(UserWarning):
    """Gain is outside the undepleted-pump regime the model assumes."""


def cos_kappa(kappa):
    """cos(kappa) with the endpoints 0 and pi/2 mapped to exactly 1 and 0."""
    if kappa == HALF_PI:
        return 0.0
    return math.cos(kappa)


@dataclass(frozen=True)
class InterferometerParams:
    """Gain ``xi``, idler phase ``phi``, beam-splitter angle ``kappa`` and the two seed occupations."""

    xi: float
    phi: float = 0.0
    kappa: float = 0.0
    n_th_i: float = 0.0
    n_th_c: float = 0.0

    def __post_init__(self):
        for name in ("xi", "phi", "kappa", "n_th_i", "n_th_c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.xi < 0:
            raise DomainError(f"xi must be non-negative, got {self.xi!r}")
        if not 0.0 <= self.kappa <= HALF_PI:
            raise DomainError(f"kappa must lie in [0, pi/2], got {self.kappa!r}")
        if self.n_th_i < 0 or self.n_th_c < 0:
            raise DomainError("thermal occupations must be non-negative")
        if self.xi > LOW_GAIN_LIMIT:
            warnings.warn(
                f"xi={self.xi} exceeds the low-gain regime (xi <= {LOW_GAIN_LIMIT}); "
                "an undepleted classical pump is a poor approximation here",
                LowGainWarning,
                stacklevel=3,
            )

    @classmethod
    def from_transmissivity(cls, xi, transmissivity, **kwargs):
        """Build from the power transmissivity cos^2(kappa) instead of kappa."""
        transmissivity = float(transmissivity)
        if not 0.0 <= transmissivity <= 1.0:
            raise DomainError(f"transmissivity must lie in [0, 1], got {transmissivity!r}")
        return cls(xi=xi, kappa=math.acos(math.sqrt(transmissivity)), **kwargs)

    @property
    def t(self):
        """Amplitude transmission cos(kappa)."""
        return cos_kappa(self.kappa)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class VisibilityResult:
    visibility: float
    n_v_max: float
    n_v_min: float
    phi_max: float
    phi_min: float
    degenerate: bool = False
    """True when there are no fringes at all (both extrema zero or equal)."""


def n_visible(params, phi=None):
    """Mean photon number in the visible mode after the second crystal."""
    phi = params.phi if phi is None else phi
    return _n_visible(params.xi, params.t, math.cos(phi), params.n_th_i, params.n_th_c)


def _n_visible(xi, t, cos_phi, n_i, n_c):
    ch2 = math.cosh(xi) ** 2
    pair_yield = math.sinh(xi) ** 2
    return pair_yield * ((n_i + 1) * ch2 * (t * t + 1 + 2 * t * cos_phi) + (n_c + 1) * (1 - t * t))


def visibility_value(t, n_i, n_c, xi):
    """Closed-form fringe visibility as a function of t = cos(kappa).

    Continuous through ``xi = 0``; callers that need the no-fringe
    convention use :func:`visibility_closed_form`.
    """
    a = (n_i + 1) * math.cosh(xi) ** 2
    return 2 * a * t / (a * (1 + t * t) + (n_c + 1) * (1 - t * t))


def visibility_closed_form(params):
    """Visibility with the extrema fixed at phi = 0 (max) and phi = pi (min)."""
    n_max = n_visible(params, 0.0)
    n_min = n_visible(params, math.pi)
    if params.xi == 0:
        return VisibilityResult(0.0, n_max, n_min, 0.0, math.pi, degenerate=True)
    v = visibility_value(params.t, params.n_th_i, params.n_th_c, params.xi)
    return VisibilityResult(min(max(v, 0.0), 1.0), n_max, n_min, 0.0, math.pi)


def _wrap(phi):
    return float(np.mod(phi, 2 * math.pi))


def visibility_by_scan(params, n_points=256, n_visible_fn=None, xatol=1e-10):
    """Visibility from numerically located extrema of N_v over phi.

    Scans ``n_points`` equally spaced phases on [0, 2 pi), then refines the
    best grid points with a bounded scalar search one grid step either side.
    ``n_visible_fn(params, phi)`` defaults to the closed form; any engine
    with that signature can be passed.
    """
    if n_points < 64:
        raise DomainError("phase scan needs at least 64 points")
    fn = n_visible if n_visible_fn is None else n_visible_fn
    grid = 2 * math.pi * np.arange(n_points) / n_points
    values = np.array([float(fn(params, p)) for p in grid])
    step = grid[1]

    def refine(k, sign):
        res = optimize.minimize_scalar(
            lambda p: sign * fn(params, p),
            bounds=(grid[k] - step, grid[k] + step),
            method="bounded",
            options={"xatol": xatol},
        )
        if sign * res.fun <= sign * values[k]:
            return float(grid[k]), float(values[k])
        return float(res.x), float(sign * res.fun)

    k_max, k_min = int(np.argmax(values)), int(np.argmin(values))
    spread = values[k_max] - values[k_min]
    if values[k_max] <= 0 or spread <= 1e-14 * abs(values[k_max]):
        return VisibilityResult(
            0.0, float(values[k_max]), float(values[k_min]), float(grid[k_max]), float(grid[k_min]), degenerate=True
        )
    phi_max, n_max = refine(k_max, -1.0)
    phi_min, n_min = refine(k_min, 1.0)
    n_min = max(n_min, 0.0)
    v = (n_max - n_min) / (n_max + n_min)
    return VisibilityResult(v, n_max, n_min, _wrap(phi_max), _wrap(phi_min))


@dataclass(frozen=True)
class VisibilityPartials:
    """Finite-difference partial derivatives of the visibility."""

    d_t: float
    d_n_c: float
    d_n_i: float
    d_xi: float
    one_sided: frozenset = frozenset()
    """Names of the variables differentiated with a one-sided stencil."""

    @property
    def values(self):
        return {"t": self.d_t, "n_c": self.d_n_c, "n_i": self.d_n_i, "xi": self.d_xi}

    @property
    def signs(self):
        return tuple(int(np.sign(v)) for v in (self.d_t, self.d_n_c, self.d_n_i, self.d_xi))

    @property
    def expected_signs_hold(self):
        """Visibility rises with t, n_i and xi and falls with n_c."""
        return self.signs == (1, -1, 1, 1)


_BOUNDS = {"t": (0.0, 1.0), "n_c": (0.0, math.inf), "n_i": (0.0, math.inf), "xi": (0.0, math.inf)}


def visibility_partials(params, rel_step=1e-6):
    """Partials of V with respect to t = cos(kappa), n_c, n_i and xi.

    Central differences with step ``rel_step * max(|x|, 1)``; a variable
    whose stencil would leave its domain gets a one-sided difference and is
    listed in ``one_sided``.
    """
    point = {"t": params.t, "n_c": params.n_th_c, "n_i": params.n_th_i, "xi": params.xi}

    def v(p):
        return visibility_value(p["t"], p["n_i"], p["n_c"], p["xi"])

    out = {}
    one_sided = set()
    for name, x in point.items():
        h = rel_step * max(abs(x), 1.0)
        lo, hi = _BOUNDS[name]
        up, down = dict(point), dict(point)
        if x - h < lo:
            up[name] = x + h
            out[name] = (v(up) - v(point)) / h
            one_sided.add(name)
        elif x + h > hi:
            down[name] = x - h
            out[name] = (v(point) - v(down)) / h
            one_sided.add(name)
        else:
            up[name], down[name] = x + h, x - h
            out[name] = (v(up) - v(down)) / (2 * h)
    return VisibilityPartials(out["t"], out["n_c"], out["n_i"], out["xi"], frozenset(one_sided))
