"""Parameter sweeps behind the figures, and the cross-engine verification campaign."""

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import fock, gaussian
from . import interferometer as itf
from .blackbody import occupation
from .constants import wavelength_to_omega
from .exceptions import CutoffGuardError, DomainError

ENGINES = ("analytic", "gaussian", "fock")
GAUSSIAN_TOL = 1e-10
FOCK_TOL = 1e-4
FOCK_MAX_SETTINGS = 64
"""Default cap on distinct (xi, phi, kappa) settings the Fock engine will evaluate in one sweep."""

VISIBILITY_PARAMS = ("cos_kappa", "kappa", "n_th_c", "n_th_i", "xi")
OCCUPATION_PARAMS = ("temperature_K", "wavelength_m")

_FIG3_FIXED = {"n_th_i": 0.2, "n_th_c": 0.15, "xi": 0.03, "kappa": 0.05 * math.pi}

BUILTIN_TARGETS = {
    # 5 K steps so that 750 K is a grid row
    "fig2a": dict(param="temperature_K", start=100.0, stop=1000.0, count=181, fixed={"wavelength_m": 8e-6}),
    # 0.2 um steps so that 20 um is a grid row
    "fig2b": dict(param="wavelength_m", start=1e-6, stop=30e-6, count=146, fixed={"temperature_K": 300.0}),
    "fig3a": dict(param="cos_kappa", start=0.0, stop=1.0, count=200,
                  fixed={k: v for k, v in _FIG3_FIXED.items() if k != "kappa"}),
    "fig3b": dict(param="n_th_c", start=0.0, stop=1.0, count=200,
                  fixed={k: v for k, v in _FIG3_FIXED.items() if k != "n_th_c"}),
    "fig3c": dict(param="n_th_i", start=0.0, stop=1.0, count=200,
                  fixed={k: v for k, v in _FIG3_FIXED.items() if k != "n_th_i"}),
    "fig3d": dict(param="xi", start=0.0005, stop=0.1, count=200,
                  fixed={k: v for k, v in _FIG3_FIXED.items() if k != "xi"}),
}


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep, over which range, with which engines."""

    target: str = "custom"
    param: str = ""
    start: float = 0.0
    stop: float = 1.0
    count: int = 200
    scale: str = "linear"
    fixed: dict = field(default_factory=dict)
    engines: tuple = ("analytic",)
    cutoff: int = fock.DEFAULT_CUTOFF
    fock_max_settings: int = FOCK_MAX_SETTINGS

    @classmethod
    def builtin(cls, target, **overrides):
        if target not in BUILTIN_TARGETS:
            raise DomainError(f"unknown sweep target {target!r}; choose from {sorted(BUILTIN_TARGETS)}")
        kwargs = dict(BUILTIN_TARGETS[target])
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(target=target, **kwargs)

    def __post_init__(self):
        object.__setattr__(self, "engines", tuple(self.engines))
        object.__setattr__(self, "fixed", dict(self.fixed))
        if self.count < 2:
            raise DomainError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise DomainError(f"sweep range must satisfy start < stop, got ({self.start}, {self.stop})")
        if self.scale not in ("linear", "log"):
            raise DomainError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise DomainError("log sweeps need a positive start")
        bad = [e for e in self.engines if e not in ENGINES]
        if bad or not self.engines:
            raise DomainError(f"unknown engines {bad}; choose from {ENGINES}")
        if self.param in OCCUPATION_PARAMS:
            if set(self.engines) != {"analytic"}:
                raise DomainError("occupation sweeps only have the analytic engine")
            other = [p for p in OCCUPATION_PARAMS if p != self.param][0]
            if other not in self.fixed:
                raise DomainError(f"occupation sweep over {self.param} needs a fixed {other}")
        elif self.param in VISIBILITY_PARAMS:
            self.params_at(self.start)
            self.params_at(self.stop)
        else:
            raise DomainError(f"cannot sweep {self.param!r}; choose from {VISIBILITY_PARAMS + OCCUPATION_PARAMS}")

    @property
    def quantity(self):
        return "n_th" if self.param in OCCUPATION_PARAMS else "visibility"

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def params_at(self, x):
        """Interferometer parameters for a visibility sweep at swept value ``x``."""
        values = {"xi": 0.0, "phi": 0.0, "kappa": 0.0, "n_th_i": 0.0, "n_th_c": 0.0}
        fixed = dict(self.fixed)
        if "cos_kappa" in fixed:
            fixed["kappa"] = _kappa_from_t(fixed.pop("cos_kappa"))
        values.update(fixed)
        if self.param == "cos_kappa":
            values["kappa"] = _kappa_from_t(x)
        else:
            values[self.param] = float(x)
        return itf.InterferometerParams(**values)


def _kappa_from_t(t):
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"cos(kappa) must lie in [0, 1], got {t!r}")
    if t == 0.0:
        return itf.HALF_PI
    return math.acos(t)


@dataclass
class SweepResult:
    spec: SweepSpec
    columns: tuple
    rows: list
    discrepancy: dict = field(default_factory=dict)
    """Largest |engine - analytic| per non-analytic engine."""
    timestamp: str = ""

    @property
    def engines_agree(self):
        tol = {"gaussian": GAUSSIAN_TOL, "fock": FOCK_TOL}
        return all(v <= tol[k] for k, v in self.discrepancy.items())

    def column(self, name):
        k = self.columns.index(name)
        return np.array([r[k] for r in self.rows])

    def metadata_lines(self, timestamp=True):
        spec = self.spec
        lines = [
            f"target: {spec.target}",
            f"swept: {spec.param} {spec.scale} [{spec.start!r}, {spec.stop!r}] count={spec.count}",
            "fixed: " + ", ".join(f"{k}={v!r}" for k, v in sorted(spec.fixed.items())),
            f"quantity: {spec.quantity}",
            f"engines: {','.join(spec.engines)}",
            f"tolerances: gaussian={GAUSSIAN_TOL!r} fock={FOCK_TOL!r}",
        ]
        if "fock" in spec.engines:
            lines.append(f"fock_cutoff: {spec.cutoff}")
        for k, v in sorted(self.discrepancy.items()):
            lines.append(f"max_abs_discrepancy_{k}: {v!r}")
        lines.append(f"version: {__version__}")
        if timestamp:
            lines.append(f"generated: {self.timestamp}")
        return lines

    def to_csv(self, meta=True):
        """CSV text with LF endings and shortest round-trip floats."""
        buf = io.StringIO()
        if meta:
            for line in self.metadata_lines():
                buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def _fock_settings(spec, values):
    settings = set()
    for x in values:
        p = spec.params_at(x)
        settings.update({(p.xi, 0.0, p.kappa), (p.xi, math.pi, p.kappa)})
    return settings


def run_sweep(spec):
    """Evaluate every requested engine at every swept value, in sweep order."""
    values = spec.values()
    columns = (spec.param,) + spec.engines
    if spec.quantity == "n_th":
        rows = []
        for x in values:
            if spec.param == "temperature_K":
                n = occupation(wavelength_to_omega(spec.fixed["wavelength_m"]), x)
            else:
                n = occupation(wavelength_to_omega(x), spec.fixed["temperature_K"])
            rows.append((float(x), n))
        return SweepResult(spec, columns, rows, timestamp=_now())

    fock_values = {}
    if "fock" in spec.engines:
        fock.check_cutoff(spec.cutoff)
        settings = _fock_settings(spec, values)
        if len(settings) > spec.fock_max_settings:
            raise CutoffGuardError(
                f"Fock engine would need {len(settings)} pipeline unitaries at d={spec.cutoff};"
                f" the limit is {spec.fock_max_settings} (reduce --count or raise the limit)"
            )
        fock_values = _fock_table(spec, values)

    rows = []
    worst = {e: 0.0 for e in spec.engines if e != "analytic"}
    for x in values:
        p = spec.params_at(x)
        analytic = itf.visibility_closed_form(p).visibility
        row = [float(x)]
        for engine in spec.engines:
            if engine == "analytic":
                v = analytic
            elif engine == "gaussian":
                v = _visibility_from_extrema(p, gaussian.n_visible(p, 0.0), gaussian.n_visible(p, math.pi))
            else:
                n_max = fock_values[(p.xi, 0.0, p.kappa, p.n_th_i, p.n_th_c)]
                n_min = fock_values[(p.xi, math.pi, p.kappa, p.n_th_i, p.n_th_c)]
                v = _visibility_from_extrema(p, n_max, n_min)
            if engine != "analytic":
                worst[engine] = max(worst[engine], abs(v - analytic))
            row.append(v)
        rows.append(tuple(row))
    return SweepResult(spec, columns, rows, discrepancy=worst, timestamp=_now())


def _visibility_from_extrema(params, n_max, n_min):
    if params.xi == 0 or n_max + n_min <= 0:
        return 0.0
    return (n_max - n_min) / (n_max + n_min)


def _fock_table(spec, values):
    by_setting = {}
    for x in values:
        p = spec.params_at(x)
        for phi in (0.0, math.pi):
            by_setting.setdefault((p.xi, phi, p.kappa), set()).add((p.n_th_i, p.n_th_c))
    table = {}
    for (xi, phi, kappa), seeds in sorted(by_setting.items()):
        seeds = sorted(seeds)
        for seed, n in zip(seeds, fock.n_visible_batch(xi, phi, kappa, seeds, spec.cutoff)):
            table[(xi, phi, kappa) + seed] = n
    return table


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# --- cross-engine verification -------------------------------------------------------------

_Q = math.pi


@dataclass(frozen=True)
class VerificationGrid:
    """Parameter grids for the engine comparison; each engine gets its own grid."""

    gaussian_xi: tuple = (0.01, 0.03, 0.1)
    gaussian_phi: tuple = (0.0, _Q / 4, _Q / 2, _Q)
    gaussian_kappa: tuple = (0.0, 0.05 * _Q, 0.25 * _Q, 0.5 * _Q)
    gaussian_n: tuple = (0.0, 0.15, 0.2, 1.0)
    fock_xi: tuple = (0.01, 0.03)
    fock_phi: tuple = (0.0, _Q / 2, _Q)
    fock_kappa: tuple = (0.0, 0.05 * _Q, 0.25 * _Q)
    fock_n: tuple = (0.0, 0.15, 0.2)
    cutoff: int = fock.DEFAULT_CUTOFF
    convergence_step: int = 2
    max_dim: int = fock.DEFAULT_MAX_DIM


def relative_discrepancy(value, reference, xi):
    """|value - reference| relative to the reference photon number.

    On a dark fringe the reference vanishes; the single-crystal pair yield
    sinh^2(xi) then sets the scale instead.
    """
    if value == reference:
        return 0.0
    scale = max(abs(reference), math.sinh(xi) ** 2, 1e-300)
    return abs(value - reference) / scale


@dataclass
class EngineComparison:
    engine: str
    tolerance: float
    max_discrepancy: float
    worst: list
    """Up to five (discrepancy, params-dict, value, reference) tuples, worst first."""
    points: int

    @property
    def passed(self):
        return self.max_discrepancy <= self.tolerance


@dataclass
class VerificationReport:
    comparisons: list
    convergence: dict = field(default_factory=dict)
    """cutoff -> max Fock discrepancy for the truncation-convergence check."""
    notes: list = field(default_factory=list)

    @property
    def convergence_ok(self):
        if len(self.convergence) < 2:
            return True
        cutoffs = sorted(self.convergence)
        return self.convergence[cutoffs[-1]] <= self.convergence[cutoffs[0]]

    @property
    def passed(self):
        return all(c.passed for c in self.comparisons) and self.convergence_ok

    def render(self):
        lines = []
        for c in self.comparisons:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{status} {c.engine} vs analytic: max relative discrepancy {c.max_discrepancy:.3e}"
                f" (tolerance {c.tolerance:.0e}, {c.points} points)"
            )
            if not c.passed:
                for disc, p, value, ref in c.worst:
                    lines.append(f"    {disc:.3e} at {p}: engine={value!r} analytic={ref!r}")
        if self.convergence:
            status = "PASS" if self.convergence_ok else "FAIL"
            desc = ", ".join(f"d={d}: {v:.3e}" for d, v in sorted(self.convergence.items()))
            lines.append(f"{status} fock truncation convergence: {desc}")
        lines.extend(self.notes)
        lines.append("OVERALL " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _gaussian_comparison(grid):
    records = []
    for xi, phi, kappa, n_i, n_c in itertools.product(
        grid.gaussian_xi, grid.gaussian_phi, grid.gaussian_kappa, grid.gaussian_n, grid.gaussian_n
    ):
        p = itf.InterferometerParams(xi=xi, phi=phi, kappa=kappa, n_th_i=n_i, n_th_c=n_c)
        ref = itf.n_visible(p)
        value = gaussian.n_visible(p)
        records.append((relative_discrepancy(value, ref, xi), _asdict(p), value, ref))
    return _summarize("gaussian", GAUSSIAN_TOL, records)


def fock_records(grid, cutoff):
    seeds = list(itertools.product(grid.fock_n, grid.fock_n))
    records = []
    for xi, phi, kappa in itertools.product(grid.fock_xi, grid.fock_phi, grid.fock_kappa):
        values = fock.n_visible_batch(xi, phi, kappa, seeds, cutoff, grid.max_dim)
        for (n_i, n_c), value in zip(seeds, values):
            p = itf.InterferometerParams(xi=xi, phi=phi, kappa=kappa, n_th_i=n_i, n_th_c=n_c)
            ref = itf.n_visible(p)
            records.append((relative_discrepancy(value, ref, xi), _asdict(p), value, ref))
    return records


def _summarize(engine, tol, records):
    records.sort(key=lambda r: r[0], reverse=True)
    return EngineComparison(engine, tol, records[0][0] if records else 0.0, records[:5], len(records))


def _asdict(p):
    return {"xi": p.xi, "phi": p.phi, "kappa": p.kappa, "n_th_i": p.n_th_i, "n_th_c": p.n_th_c}


def verify_engines(grid=None):
    """Compare the covariance engine and the Fock oracle against the closed form.

    Raises :class:`CutoffGuardError` if ``grid.cutoff`` exceeds the size
    guard; a convergence cutoff beyond the guard is skipped with a note.
    """
    grid = grid or VerificationGrid()
    fock.check_cutoff(grid.cutoff, max_dim=grid.max_dim)
    comparisons = [_gaussian_comparison(grid)]
    fock_cmp = _summarize("fock", FOCK_TOL, fock_records(grid, grid.cutoff))
    comparisons.append(fock_cmp)
    report = VerificationReport(comparisons)
    report.convergence[grid.cutoff] = fock_cmp.max_discrepancy
    if grid.convergence_step:
        d2 = grid.cutoff + grid.convergence_step
        try:
            fock.check_cutoff(d2, max_dim=grid.max_dim)
        except CutoffGuardError:
            report.notes.append(f"note: convergence check at d={d2} skipped (exceeds size guard)")
        else:
            report.convergence[d2] = _summarize("fock", FOCK_TOL, fock_records(grid, d2)).max_discrepancy
    if not fock_cmp.passed:
        worst = fock_cmp.worst[0][1]
        report.notes.append(
            f"diagnosis: cutoff d={grid.cutoff} truncates the thermal seeds too hard"
            f" (e.g. n_th={max(worst['n_th_i'], worst['n_th_c'])} loses"
            f" {_tail(max(worst['n_th_i'], worst['n_th_c']), grid.cutoff):.2e} of its weight); increase --cutoff"
        )
    return report


def _tail(n_th, d):
    return (n_th / (n_th + 1)) ** d if n_th > 0 else 0.0
