import math
import warnings

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from thermal_iup import interferometer as itf
from thermal_iup.exceptions import DomainError
from thermal_iup.interferometer import InterferometerParams

OP = dict(xi=0.03, kappa=0.05 * math.pi, n_th_i=0.2, n_th_c=0.15)


def test_params_validation():
    with pytest.raises(DomainError):
        InterferometerParams(xi=-0.1)
    with pytest.raises(DomainError):
        InterferometerParams(xi=0.1, kappa=2.0)
    with pytest.raises(DomainError):
        InterferometerParams(xi=0.1, n_th_c=-1.0)
    with pytest.raises(DomainError):
        InterferometerParams(xi=math.inf)


def test_low_gain_warning():
    with pytest.warns(itf.LowGainWarning):
        InterferometerParams(xi=0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        InterferometerParams(xi=0.2)


def test_from_transmissivity():
    p = InterferometerParams.from_transmissivity(0.03, 0.5)
    assert p.kappa == pytest.approx(math.pi / 4, rel=1e-15)
    assert InterferometerParams.from_transmissivity(0.03, 1.0).kappa == 0.0
    with pytest.raises(DomainError):
        InterferometerParams.from_transmissivity(0.03, 1.5)


def test_n_visible_zero_gain():
    for phi in (0.0, 1.0, math.pi):
        assert itf.n_visible(InterferometerParams(xi=0.0, phi=phi, kappa=0.3, n_th_i=2, n_th_c=3)) == 0.0


def test_n_visible_examples():
    assert itf.n_visible(InterferometerParams(xi=0.03)) == pytest.approx(3.604322074133297e-3, rel=1e-13)
    assert itf.n_visible(InterferometerParams(xi=0.03, phi=math.pi)) == 0.0


@given(
    st.floats(0, 0.2), st.floats(-10, 10), st.floats(0, math.pi / 2), st.floats(0, 10), st.floats(0, 10)
)
def test_n_visible_phase_parity_and_period(xi, phi, kappa, n_i, n_c):
    p = InterferometerParams(xi=xi, kappa=kappa, n_th_i=n_i, n_th_c=n_c)
    n = itf.n_visible(p, phi)
    assert n >= 0
    assert itf.n_visible(p, -phi) == pytest.approx(n, rel=1e-12, abs=1e-300)
    assert itf.n_visible(p, phi + 2 * math.pi) == pytest.approx(n, rel=1e-9, abs=1e-15)


def test_visibility_operating_point():
    # 40-digit mpmath evaluation of the closed form
    v = itf.visibility_closed_form(InterferometerParams(**OP))
    assert v.visibility == pytest.approx(0.9882025765752524, rel=1e-14)
    assert (v.phi_max, v.phi_min) == (0.0, math.pi)
    assert not v.degenerate


@pytest.mark.parametrize("n_i, n_c, xi", [(0, 0, 0.01), (5, 0, 0.2), (0.2, 3, 0.1)])
def test_visibility_endpoints(n_i, n_c, xi):
    full = itf.visibility_closed_form(InterferometerParams(xi=xi, kappa=0.0, n_th_i=n_i, n_th_c=n_c))
    none = itf.visibility_closed_form(InterferometerParams(xi=xi, kappa=math.pi / 2, n_th_i=n_i, n_th_c=n_c))
    assert full.visibility == 1.0
    assert none.visibility == 0.0


def test_zero_gain_visibility_is_flagged():
    v = itf.visibility_closed_form(InterferometerParams(xi=0.0, kappa=0.3))
    assert v.visibility == 0.0 and v.degenerate


def test_uniform_seeding_invariance():
    values = [
        itf.visibility_closed_form(InterferometerParams(xi=0.03, kappa=0.05 * math.pi, n_th_i=n, n_th_c=n)).visibility
        for n in (0, 0.5, 5, 50)
    ]
    assert max(values) - min(values) <= 1e-12 * values[0]


@given(st.floats(1e-4, 0.2), st.floats(0, math.pi / 2), st.floats(0, 1e3), st.floats(0, 1e3))
def test_visibility_in_unit_interval(xi, kappa, n_i, n_c):
    v = itf.visibility_closed_form(InterferometerParams(xi=xi, kappa=kappa, n_th_i=n_i, n_th_c=n_c)).visibility
    assert 0.0 <= v <= 1.0


def random_params(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield InterferometerParams(
            xi=rng.uniform(0.005, 0.2),
            phi=0.0,
            kappa=rng.uniform(0.0, 0.49 * math.pi),
            n_th_i=rng.uniform(0, 2),
            n_th_c=rng.uniform(0, 2),
        )


def circular_distance(a, b):
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def test_scan_matches_closed_form():
    for p in random_params(7, 50):
        scan = itf.visibility_by_scan(p)
        closed = itf.visibility_closed_form(p)
        assert abs(scan.visibility - closed.visibility) <= 1e-8
        assert circular_distance(scan.phi_max, 0.0) <= 1e-6
        assert circular_distance(scan.phi_min, math.pi) <= 1e-6


def test_scan_degenerate_cases():
    flat = itf.visibility_by_scan(InterferometerParams(xi=0.03, kappa=math.pi / 2))
    assert flat.visibility == 0.0 and flat.degenerate
    assert itf.visibility_by_scan(InterferometerParams(xi=0.0)).degenerate
    const = itf.visibility_by_scan(InterferometerParams(xi=0.03), n_visible_fn=lambda p, phi: 2.5)
    assert const.visibility == 0.0 and const.degenerate
    with pytest.raises(DomainError):
        itf.visibility_by_scan(InterferometerParams(xi=0.03), n_points=32)


def test_scan_accepts_other_engine():
    from thermal_iup import gaussian

    p = InterferometerParams(**OP)
    v = itf.visibility_by_scan(p, n_points=64, n_visible_fn=gaussian.n_visible)
    assert v.visibility == pytest.approx(itf.visibility_closed_form(p).visibility, abs=1e-8)


# symbolic oracle for the partial derivatives
_t, _ni, _nc, _xi = sp.symbols("t n_i n_c xi", positive=True)
_a = (_ni + 1) * sp.cosh(_xi) ** 2
_V = 2 * _a * _t / (_a * (1 + _t**2) + (_nc + 1) * (1 - _t**2))
_DV = {name: sp.lambdify((_t, _ni, _nc, _xi), sp.diff(_V, sym)) for name, sym in
       (("t", _t), ("n_c", _nc), ("n_i", _ni), ("xi", _xi))}


@pytest.mark.parametrize(
    "point",
    [OP, dict(xi=0.01, kappa=0.4, n_th_i=0.0, n_th_c=1.0), dict(xi=0.1, kappa=1.2, n_th_i=0.7, n_th_c=0.3)],
)
def test_partials_match_symbolic_derivatives(point):
    p = InterferometerParams(**point)
    fd = itf.visibility_partials(p)
    args = (p.t, p.n_th_i, p.n_th_c, p.xi)
    for name, value in fd.values.items():
        assert value == pytest.approx(_DV[name](*args), rel=1e-6)


def test_partials_signs_at_operating_point():
    d = itf.visibility_partials(InterferometerParams(**OP))
    assert d.signs == (1, -1, 1, 1)
    assert d.expected_signs_hold
    assert not d.one_sided


def test_partials_one_sided_at_boundary():
    d = itf.visibility_partials(InterferometerParams(xi=0.03, kappa=0.3, n_th_i=0.0, n_th_c=0.0))
    assert d.one_sided == frozenset({"n_i", "n_c"})
    assert d.signs == (1, -1, 1, 1)
    d = itf.visibility_partials(InterferometerParams(xi=0.03, kappa=0.0))
    assert "t" in d.one_sided


def test_uniform_direction_derivative_vanishes():
    h = 1e-6
    for n in (0.1, 0.5, 3.0):
        up = itf.visibility_value(0.6, n + h, n + h, 0.03)
        down = itf.visibility_value(0.6, n - h, n - h, 0.03)
        assert abs((up - down) / (2 * h)) <= 1e-9


def test_hotter_outside_improves_visibility():
    base = itf.visibility_value(0.8, 0.15, 0.15, 0.03)
    assert itf.visibility_value(0.8, 0.5, 0.15, 0.03) > base
