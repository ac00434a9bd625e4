"""Command-line interface: ``blackbody``, ``visibility``, ``sweep`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 I/O error.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__, blackbody, fock, sweeps, units
from . import interferometer as itf
from .constants import SpectralPoint, omega_to_wavelength
from .exceptions import CutoffGuardError, DomainError

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"{flag}: {message}")


def _convert(args, dest, parser):
    value = getattr(args, dest)
    if value is None:
        return None
    try:
        return parser(value)
    except DomainError as exc:
        raise UsageError("--" + dest.replace("_", "-"), exc) from None


def _list(parser):
    def parse(text):
        return tuple(parser(v) for v in str(text).split(",") if v.strip())
    return parse


def load_config(path):
    """Flat ``key = value`` file; keys are flag names with or without leading dashes."""
    config = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError("--config", f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("--config", f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        config[key.lstrip("-").replace("-", "_")] = value
    return config


def _merge_config(args, parser_defaults):
    if not args.config:
        return
    for key, value in load_config(args.config).items():
        key = "lambda_" if key == "lambda" else key
        if key in ("command", "config") or not hasattr(args, key):
            raise UsageError("--config", f"unknown key {key!r} for {args.command}")
        if getattr(args, key) == parser_defaults.get(key):
            current_default = parser_defaults.get(key)
            if isinstance(current_default, bool):
                value = value.lower() in ("1", "true", "yes", "on")
            setattr(args, key, value)


def _dump(payload):
    print(json.dumps(payload, indent=2, allow_nan=False))


def cmd_blackbody(args):
    temperature = _convert(args, "temp", units.parse_temperature)
    if temperature is None:
        raise UsageError("--temp", "is required")
    wavelength = _convert(args, "wavelength", units.parse_length)
    omega = _convert(args, "omega", units.parse_omega)
    if wavelength is not None and omega is not None:
        raise UsageError("--wavelength", "give either --wavelength or --omega, not both")
    band = _convert(args, "band", units.parse_band)
    area = _convert(args, "area", units.parse_area)
    if (band is None) != (area is None):
        raise UsageError("--band" if band is None else "--area", "--band and --area go together")

    out = {"temperature_K": temperature}
    try:
        out["wien_peak_wavelength_m"] = blackbody.wien_peak_wavelength(temperature)
    except DomainError as exc:
        raise UsageError("--temp", exc) from None
    if wavelength is not None or omega is not None:
        flag = "--wavelength" if wavelength is not None else "--omega"
        try:
            point = SpectralPoint.from_wavelength(wavelength) if wavelength is not None else SpectralPoint(omega)
            env = blackbody.ThermalEnvironment(point, temperature)
        except DomainError as exc:
            raise UsageError(flag, exc) from None
        out.update(
            omega_rad_s=point.omega,
            wavelength_m=omega_to_wavelength(point.omega),
            n_th=blackbody.mean_occupation(env),
            energy_density_J_s_m3=blackbody.planck_energy_density(env),
        )
    if band is not None:
        try:
            bg = blackbody.detector_band_background(temperature, band, area)
        except DomainError as exc:
            raise UsageError("--band", exc) from None
        out.update(band_cm1=list(band), area_m2=area, power_W=bg.power, photon_flux_s1=bg.photon_flux)
    _dump(out)
    return EXIT_OK


def _resolve_occupation(args, direct, temp_dest, wavelength):
    n = _convert(args, direct, units.parse_number)
    temp = _convert(args, temp_dest, units.parse_temperature)
    flag = "--" + direct.replace("_", "-")
    if n is not None and temp is not None:
        raise UsageError(flag, f"give either {flag} or --{temp_dest.replace('_', '-')}, not both")
    if n is not None:
        return n
    if temp is None:
        return 0.0
    if wavelength is None:
        raise UsageError("--lambda", f"needed to convert --{temp_dest.replace('_', '-')} into an occupation")
    try:
        return blackbody.occupation(SpectralPoint.from_wavelength(wavelength).omega, temp)
    except DomainError as exc:
        raise UsageError("--" + temp_dest.replace("_", "-"), exc) from None


def cmd_visibility(args):
    xi = _convert(args, "xi", units.parse_number)
    if xi is None:
        raise UsageError("--xi", "is required")
    kappa = _convert(args, "kappa", units.parse_angle)
    tau = _convert(args, "transmissivity", units.parse_number)
    if kappa is not None and tau is not None:
        raise UsageError("--kappa", "give either --kappa or --transmissivity, not both")
    if tau is not None:
        if not 0.0 <= tau <= 1.0:
            raise UsageError("--transmissivity", f"must lie in [0, 1], got {tau}")
        kappa = itf.HALF_PI if tau == 0 else math.acos(math.sqrt(tau))
    kappa = 0.0 if kappa is None else kappa
    wavelength = _convert(args, "lambda_", units.parse_length)
    n_i = _resolve_occupation(args, "n_i", "temp_i", wavelength)
    n_c = _resolve_occupation(args, "n_c", "temp_c", wavelength)
    phi = _convert(args, "phi", units.parse_angle)
    try:
        params = itf.InterferometerParams(xi=xi, phi=phi or 0.0, kappa=kappa, n_th_i=n_i, n_th_c=n_c)
    except DomainError as exc:
        flag = "--kappa" if "kappa" in str(exc) else "--xi" if "xi" in str(exc) else "--n-i/--n-c"
        raise UsageError(flag, exc) from None
    out = {"xi": params.xi, "kappa": params.kappa, "cos_kappa": params.t, "n_th_i": n_i, "n_th_c": n_c}
    if phi is not None:
        out.update(phi=phi, n_v=itf.n_visible(params))
    else:
        result = itf.visibility_by_scan(params) if args.method == "scan" else itf.visibility_closed_form(params)
        out.update(
            method=args.method,
            visibility=result.visibility,
            n_v_max=result.n_v_max,
            n_v_min=result.n_v_min,
            phi_max=result.phi_max,
            phi_min=result.phi_min,
            degenerate=result.degenerate,
        )
    _dump(out)
    return EXIT_OK


_PARAM_PARSERS = {
    "temperature_K": units.parse_temperature,
    "wavelength_m": units.parse_length,
    "kappa": units.parse_angle,
}


def _param_parser(name):
    return _PARAM_PARSERS.get(name, units.parse_number)


def _parse_fixed(text):
    fixed = {}
    for item in str(text).split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise DomainError(f"expected name=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        fixed[key] = _param_parser(key)(value)
    return fixed


def cmd_sweep(args):
    engines = tuple(e.strip() for e in args.engines.split(",") if e.strip())
    count = _convert(args, "count", int)
    cutoff = _convert(args, "cutoff", int)
    limit = _convert(args, "fock_max_settings", int)
    try:
        if args.target == "custom":
            if not args.param:
                raise UsageError("--param", "required for custom sweeps")
            parse = _param_parser(args.param)
            for flag in ("start", "stop"):
                if getattr(args, flag) is None:
                    raise UsageError(f"--{flag}", "required for custom sweeps")
            spec = sweeps.SweepSpec(
                target="custom",
                param=args.param,
                start=_convert(args, "start", parse),
                stop=_convert(args, "stop", parse),
                count=count or 200,
                scale=args.scale,
                fixed=_convert(args, "fixed", _parse_fixed) or {},
                engines=engines,
                cutoff=cutoff or fock.DEFAULT_CUTOFF,
                fock_max_settings=limit or sweeps.FOCK_MAX_SETTINGS,
            )
        else:
            spec = sweeps.SweepSpec.builtin(
                args.target, count=count, engines=engines, cutoff=cutoff, fock_max_settings=limit
            )
        result = sweeps.run_sweep(spec)
    except CutoffGuardError as exc:
        raise UsageError("--engines", exc) from None
    except DomainError as exc:
        raise UsageError("--target" if args.target != "custom" else "--param", exc) from None

    text = result.to_csv(meta=not args.no_meta)
    if not args.out:
        raise UsageError("--out", "is required")
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: --out: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    if args.plot:
        try:
            write_plot(result, args.plot)
        except OSError as exc:
            print(f"error: --plot: cannot write {args.plot}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return EXIT_OK


def write_plot(result, path):
    """Static line plot of every engine column; format follows the file extension."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = result.column(result.columns[0])
    styles = {"analytic": "-", "gaussian": "--", "fock": ":"}
    for engine in result.columns[1:]:
        ax.plot(x, result.column(engine), styles[engine], label=engine)
    ax.set_xlabel(result.columns[0])
    ax.set_ylabel(result.spec.quantity)
    ax.set_title(result.spec.target)
    if len(result.columns) > 2:
        ax.legend()
    fig.tight_layout()
    try:
        fig.savefig(path)
    finally:
        plt.close(fig)


def cmd_verify(args):
    grid_kwargs = {}
    for dest, fields, parse in (
        ("xi", ("gaussian_xi", "fock_xi"), units.parse_number),
        ("phi", ("gaussian_phi", "fock_phi"), units.parse_angle),
        ("kappa", ("gaussian_kappa", "fock_kappa"), units.parse_angle),
        ("n", ("gaussian_n", "fock_n"), units.parse_number),
    ):
        values = _convert(args, dest, _list(parse))
        if values:
            grid_kwargs.update({f: values for f in fields})
    cutoff = _convert(args, "cutoff", int)
    if cutoff is not None:
        grid_kwargs["cutoff"] = cutoff
    grid = sweeps.VerificationGrid(**grid_kwargs)
    try:
        report = sweeps.verify_engines(grid)
    except CutoffGuardError as exc:
        raise UsageError("--cutoff", exc) from None
    except DomainError as exc:
        raise UsageError("--kappa/--xi/--n", exc) from None
    print(report.render())
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="thermal-iup", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", help="key=value file mirroring the flags; flags win")
        return p

    p = add("blackbody", "thermal occupation, energy density, Wien peak and detector background")
    p.add_argument("--wavelength", help="e.g. 8um")
    p.add_argument("--omega", help="angular frequency, e.g. 2.35e14rad/s")
    p.add_argument("--temp", help="e.g. 300K")
    p.add_argument("--band", help="wavenumber band, e.g. 1176cm-1:1234cm-1")
    p.add_argument("--area", help="detector area, e.g. 1mm2")
    p.set_defaults(func=cmd_blackbody)

    p = add("visibility", "visible-mode photon number and fringe visibility")
    p.add_argument("--xi", help="parametric gain (dimensionless)")
    p.add_argument("--kappa", help="beam-splitter angle, e.g. 0.05pi or 0.2rad")
    p.add_argument("--transmissivity", help="power transmissivity cos^2(kappa)")
    p.add_argument("--n-i", help="mean occupation seeding the first crystal")
    p.add_argument("--n-c", help="mean occupation injected at the beam splitter")
    p.add_argument("--lambda", dest="lambda_", help="idler wavelength for --temp-i/--temp-c, e.g. 8um")
    p.add_argument("--temp-i", help="temperature of the first-crystal seed, e.g. 300K")
    p.add_argument("--temp-c", help="temperature of the beam-splitter seed, e.g. 300K")
    p.add_argument("--phi", help="report N_v at this idler phase instead of the visibility")
    p.add_argument("--method", choices=("closed", "scan"), default="closed")
    p.set_defaults(func=cmd_visibility)

    p = add("sweep", "regenerate a figure panel (or a custom sweep) as CSV")
    p.add_argument("--target", default="custom", choices=sorted(sweeps.BUILTIN_TARGETS) + ["custom"])
    p.add_argument("--param", help="swept parameter for custom sweeps")
    p.add_argument("--start")
    p.add_argument("--stop")
    p.add_argument("--count")
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--fixed", help="comma-separated name=value pairs for custom sweeps")
    p.add_argument("--engines", default="analytic", help="comma-separated subset of analytic,gaussian,fock")
    p.add_argument("--cutoff", help="Fock cutoff d")
    p.add_argument("--fock-max-settings", help="cap on distinct Fock pipeline settings")
    p.add_argument("--out", help="CSV output path (required)")
    p.add_argument("--plot", help="optional static plot path (.svg, .png, .pdf)")
    p.add_argument("--no-meta", action="store_true", help="omit the # metadata header")
    p.set_defaults(func=cmd_sweep)

    p = add("verify", "cross-check the Gaussian engine and Fock oracle against the closed form")
    p.add_argument("--xi", help="comma-separated gains")
    p.add_argument("--phi", help="comma-separated phases")
    p.add_argument("--kappa", help="comma-separated beam-splitter angles")
    p.add_argument("--n", help="comma-separated seed occupations (used for both seeds)")
    p.add_argument("--cutoff", help=f"Fock cutoff d (default {fock.DEFAULT_CUTOFF})")
    p.set_defaults(func=cmd_verify)
    return parser, sub


def main(argv=None):
    parser, sub = build_parser()
    args = parser.parse_args(argv)
    defaults = vars(sub.choices[args.command].parse_args([]))
    try:
        _merge_config(args, defaults)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
