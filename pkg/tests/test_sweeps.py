import math

import numpy as np
import pytest

from thermal_iup import sweeps
from thermal_iup.exceptions import CutoffGuardError, DomainError
from thermal_iup.sweeps import SweepSpec, VerificationGrid


@pytest.fixture(scope="module")
def panels():
    return {t: sweeps.run_sweep(SweepSpec.builtin(t)) for t in sweeps.BUILTIN_TARGETS}


def test_fig2a_threshold_row(panels):
    r = panels["fig2a"]
    t = r.column("temperature_K")
    k = int(np.argmin(abs(t - 750)))
    assert t[k] == 750.0
    assert r.column("analytic")[k] == pytest.approx(0.100, rel=0.05)


def test_fig2b_threshold_row(panels):
    r = panels["fig2b"]
    lam = r.column("wavelength_m")
    k = int(np.argmin(abs(lam - 20e-6)))
    assert lam[k] == pytest.approx(20e-6, rel=1e-12)
    assert r.column("analytic")[k] == pytest.approx(0.100, rel=0.05)


def test_fig3a_endpoints(panels):
    v = panels["fig3a"].column("analytic")
    assert len(v) == 200
    assert v[0] == 0.0 and v[-1] == 1.0


def test_fig3_monotonicity(panels):
    assert np.all(np.diff(panels["fig3a"].column("analytic")) > 0)
    assert np.all(np.diff(panels["fig3b"].column("analytic")) < 0)
    assert np.all(np.diff(panels["fig3c"].column("analytic")) > 0)
    assert np.all(np.diff(panels["fig3d"].column("analytic")) > 0)


def test_fig3b_below_one_without_seed(panels):
    assert panels["fig3b"].column("n_th_c")[0] == 0.0
    assert panels["fig3b"].column("analytic")[0] < 1.0


def test_rows_follow_sweep_order(panels):
    for r in panels.values():
        x = r.column(r.columns[0])
        assert np.all(np.diff(x) > 0)


def test_csv_is_deterministic():
    spec = SweepSpec.builtin("fig3c", engines=("analytic", "gaussian"))
    a = sweeps.run_sweep(spec).to_csv(meta=False)
    b = sweeps.run_sweep(spec).to_csv(meta=False)
    assert a == b
    with_meta = sweeps.run_sweep(spec).to_csv().splitlines()
    assert [l for l in with_meta if not l.startswith("# generated")] == [
        l for l in sweeps.run_sweep(spec).to_csv().splitlines() if not l.startswith("# generated")
    ]


def test_csv_layout_and_round_trip():
    r = sweeps.run_sweep(SweepSpec.builtin("fig3d", engines=("analytic", "gaussian")))
    text = r.to_csv()
    lines = text.split("\n")
    assert "\r" not in text and text.endswith("\n")
    header_at = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert all(l.startswith("# ") for l in lines[:header_at])
    assert lines[header_at] == "xi,analytic,gaussian"
    first = lines[header_at + 1].split(",")
    assert [float(v) for v in first] == list(r.rows[0])


def test_engine_columns_agree():
    # seeds up to n_th = 1 need a larger cutoff than the default
    spec = SweepSpec.builtin("fig3c", count=10, engines=("analytic", "gaussian", "fock"), cutoff=16)
    r = sweeps.run_sweep(spec)
    assert r.engines_agree
    assert r.discrepancy["gaussian"] <= 1e-10


def test_fock_guard_refuses_large_sweeps():
    with pytest.raises(CutoffGuardError, match="limit is 64"):
        sweeps.run_sweep(SweepSpec.builtin("fig3a", engines=("fock",)))
    with pytest.raises(CutoffGuardError):
        sweeps.run_sweep(SweepSpec.builtin("fig3b", engines=("fock",), cutoff=17))


def test_custom_sweep():
    spec = SweepSpec(param="kappa", start=0.0, stop=math.pi / 2, count=5, fixed={"xi": 0.03, "n_th_i": 0.2})
    r = sweeps.run_sweep(spec)
    assert r.column("analytic")[0] == 1.0 and r.column("analytic")[-1] == 0.0
    log = SweepSpec(param="temperature_K", start=100, stop=1000, count=3, scale="log", fixed={"wavelength_m": 8e-6})
    assert sweeps.run_sweep(log).column("temperature_K") == pytest.approx([100, 316.22776601683796, 1000])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(param="xi", start=0.1, stop=0.0, fixed={}),
        dict(param="xi", start=0.0, stop=0.1, count=1),
        dict(param="bogus", start=0.0, stop=1.0),
        dict(param="xi", start=0.0, stop=0.1, engines=("magic",)),
        dict(param="temperature_K", start=100, stop=200, engines=("fock",), fixed={"wavelength_m": 8e-6}),
        dict(param="temperature_K", start=100, stop=200),
        dict(param="n_th_c", start=-1.0, stop=1.0, fixed={"xi": 0.03}),
        dict(param="xi", start=0.0, stop=0.1, scale="log"),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(DomainError):
        SweepSpec(**kwargs)


def test_unknown_target():
    with pytest.raises(DomainError):
        SweepSpec.builtin("fig9")


def test_relative_discrepancy():
    assert sweeps.relative_discrepancy(0.0, 0.0, 0.0) == 0.0
    assert sweeps.relative_discrepancy(1.1, 1.0, 0.01) == pytest.approx(0.1)
    assert sweeps.relative_discrepancy(1e-20, 0.0, 0.01) == pytest.approx(1e-20 / math.sinh(0.01) ** 2)


SMALL = VerificationGrid(
    gaussian_xi=(0.03,), gaussian_phi=(0.0, math.pi), gaussian_kappa=(0.0, 0.3), gaussian_n=(0.0, 0.2),
    fock_xi=(0.03,), fock_phi=(0.0, math.pi), fock_kappa=(0.3,), fock_n=(0.0, 0.2), cutoff=8,
)


def test_verify_small_grid_passes():
    report = sweeps.verify_engines(SMALL)
    assert report.passed
    assert set(report.convergence) == {8, 10}
    assert report.convergence[10] <= report.convergence[8]
    assert "OVERALL PASS" in report.render()


def test_verify_reports_broken_oracle():
    from dataclasses import replace

    report = sweeps.verify_engines(replace(SMALL, cutoff=3))
    assert not report.passed
    text = report.render()
    assert "FAIL fock" in text and "diagnosis" in text


def test_verify_guard_and_skipped_convergence():
    from dataclasses import replace

    with pytest.raises(CutoffGuardError):
        sweeps.verify_engines(replace(SMALL, cutoff=17))
    report = sweeps.verify_engines(replace(SMALL, cutoff=8, max_dim=729))
    assert list(report.convergence) == [8]
    assert any("skipped" in n for n in report.notes)


def test_zero_parameter_corner_all_engines_zero():
    from thermal_iup import fock, gaussian
    from thermal_iup import interferometer as itf

    p = itf.InterferometerParams(xi=0.0)
    assert itf.n_visible(p) == 0.0
    assert gaussian.n_visible(p) == 0.0
    assert fock.n_visible_batch(0.0, 0.0, 0.0, [(0.0, 0.0)], d=6) == [0.0]
