"""Command-line front end.

Subcommands: spectrum, threshold, bands, evolve, resonance, cavity, verify.
Every run writes CSV data files, a PNG figure for each report (suppress with
--no-plot) and a JSON manifest with the fully resolved parameters, stage
timings and an output inventory.  Reruns with the same configuration produce
byte-identical CSV payloads.

Configuration precedence, lowest to highest: built-in defaults, defaults.cfg
in $PTROTOR_CONFIG_DIR, --preset bundle, --config file, explicit flags.
Config files are flat `key = value` lines with `#` comments.

The kinetic parameter may be given three ways: --beta accepts a decimal, an
exact rational "N/M", or "x/2pi" meaning x/(2*pi); --two-pi-beta takes the
2*pi*beta convention; --beta-rational requires an exact "N/M".
"""

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import cavity, dynamics, floquet, model, output, resonance
from . import verify as verify_mod
from .errors import SimulationError
from .presets import PRESETS

ENV_CONFIG_DIR = "PTROTOR_CONFIG_DIR"

_LENGTH_UNITS = (("nm", 1e-9), ("um", 1e-6), ("µm", 1e-6), ("mm", 1e-3), ("cm", 1e-2), ("m", 1.0))


def parse_length(value):
    """Length in meters from '300um', '5cm', '9.182mm', or a bare number."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    for suffix, scale in _LENGTH_UNITS:
        if text.endswith(suffix):
            return float(text[: -len(suffix)]) * scale
    return float(text)


def parse_beta(value):
    """('rational', N, M) or ('real', beta) from decimal, 'N/M' or 'x/2pi'."""
    if isinstance(value, tuple) and value and value[0] in ("real", "rational"):
        return value
    if isinstance(value, (int, float)):
        return ("real", float(value))
    text = str(value).strip().lower()
    if text.endswith("/2pi"):
        return ("real", float(text[:-4]) / (2.0 * math.pi))
    if "/" in text:
        numer, denom = text.split("/", 1)
        return ("rational", int(numer), int(denom))
    return ("real", float(text))


def parse_rational(value):
    kind, *parts = parse_beta(value)
    if kind != "rational":
        raise ValueError(f"expected an exact rational N/M, got {value!r}")
    return ("rational", *parts)


def parse_rational_list(value):
    if isinstance(value, (list, tuple)):
        return [parse_rational(v) for v in value]
    return [parse_rational(part) for part in str(value).split(",") if part.strip()]


def parse_float_list(value):
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(part) for part in str(value).split(",") if part.strip()]


def parse_int_list(value):
    if isinstance(value, int):
        return [value]
    return [int(part) for part in str(value).split(",") if part.strip()]


@dataclass(frozen=True)
class Option:
    key: str
    converter: object
    default: object = None
    help: str = ""
    flag: str | None = None

    @property
    def flag_text(self):
        return self.flag or "--" + self.key.replace("_", "-")


_ROTOR_OPTIONS = (
    Option("kick_strength", float, None, "kick strength K = V0/hbar", "--K"),
    Option("lam", float, 0.0, "non-Hermiticity lambda in [0, 1)", "--lambda"),
    Option("beta", parse_beta, None, "kinetic parameter: decimal, N/M or x/2pi"),
    Option("two_pi_beta", float, None, "kinetic parameter as 2*pi*beta"),
    Option("beta_rational", parse_rational, None, "exact rational beta N/M"),
    Option("n_sites", int, 1000, "momentum truncation: l in [-Ns, Ns]", "--Ns"),
)


def _rotor_options(**overrides):
    opts = []
    for opt in _ROTOR_OPTIONS:
        if opt.key in overrides:
            opts.append(replace(opt, default=overrides[opt.key]))
        else:
            opts.append(opt)
    return tuple(opts)


def _add_options(parser, options):
    for opt in options:
        parser.add_argument(
            opt.flag_text, dest=opt.key, type=opt.converter, default=None, help=opt.help
        )


def _read_config_file(path):
    values = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _resolve(args, options):
    """Merge config layers under the explicit flags; convert to native types."""
    by_key = {opt.key: opt for opt in options}
    values = {opt.key: opt.default for opt in options}

    def apply(layer, strict, origin):
        for key, raw in layer.items():
            if key not in by_key:
                if strict:
                    raise ValueError(f"unknown configuration key {key!r} in {origin}")
                continue
            values[key] = by_key[key].converter(raw) if isinstance(raw, str) else raw

    env_dir = os.environ.get(ENV_CONFIG_DIR)
    if env_dir:
        default_cfg = Path(env_dir) / "defaults.cfg"
        if default_cfg.exists():
            apply(_read_config_file(default_cfg), strict=False, origin=str(default_cfg))
    if args.preset:
        apply(PRESETS[args.preset], strict=False, origin=f"preset {args.preset}")
    if args.config:
        apply(_read_config_file(args.config), strict=True, origin=args.config)
    for key in by_key:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return values


def _require(parser, values, keys):
    for key in keys:
        if values.get(key) is None:
            flag = "--" + key.replace("_", "-") if key != "kick_strength" else "--K"
            parser.error(f"missing required option {flag}")


def _beta_spec(parser, values, require=True):
    """Exactly one of beta / two_pi_beta / beta_rational, normalized."""
    given = [k for k in ("beta", "two_pi_beta", "beta_rational") if values.get(k) is not None]
    if len(given) != 1:
        if not given and not require:
            return None
        parser.error("specify exactly one of --beta, --two-pi-beta, --beta-rational")
    key = given[0]
    if key == "two_pi_beta":
        return ("real", values[key] / (2.0 * math.pi))
    return values[key]


def _make_params(beta_spec, kick_strength, lam, n_sites):
    if beta_spec[0] == "rational":
        return model.RotorParams.from_rational(
            beta_spec[1], beta_spec[2], kick_strength, lam, n_sites
        )
    return model.RotorParams(kick_strength, lam, beta=beta_spec[1], n_sites=n_sites)


def _beta_report(params):
    report = {
        "beta": params.beta,
        "beta_raw": params.beta_raw,
        "two_pi_beta": 2.0 * math.pi * params.beta,
    }
    if params.beta_rational is not None:
        report["beta_rational"] = "%d/%d" % params.beta_rational
    return report


def _out_dir(args):
    path = Path(args.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _finish(manifest, out_dir, name, written):
    for path in written:
        manifest.add_output(path)
    manifest_path = out_dir / f"{name}_manifest.json"
    manifest.write(manifest_path)
    return manifest_path


# ------------------------------------------------------------------ spectrum


SPECTRUM_OPTIONS = _rotor_options() + (
    Option("edge_fraction", float, floquet.DEFAULT_EDGE_FRACTION,
           "outer lattice fraction treated as truncation edge"),
)


def cmd_spectrum(args, parser):
    values = _resolve(args, SPECTRUM_OPTIONS)
    _require(parser, values, ("kick_strength",))
    beta_spec = _beta_spec(parser, values)
    params = _make_params(beta_spec, values["kick_strength"], values["lam"], values["n_sites"])
    out_dir = _out_dir(args)
    timer = output.StageTimer()
    with timer.stage("eigensolve"):
        spectrum = floquet.quasi_energy_spectrum(floquet.build_floquet_matrix(params))
        spectrum = floquet.filter_edge_states(spectrum, values["edge_fraction"])
    with timer.stage("write"):
        rows = zip(
            spectrum.eps_t.real,
            spectrum.eps_t.imag,
            spectrum.participation,
            spectrum.center,
            spectrum.edge_flagged,
        )
        csv_path = output.write_csv(
            out_dir / "spectrum.csv",
            ("re_epsT", "im_epsT", "R", "center", "edge_flagged"),
            rows,
        )
    written = [csv_path]
    if not args.no_plot:
        from . import plots

        with timer.stage("plot"):
            written.append(plots.plot_spectrum(spectrum, out_dir / "spectrum.png"))
    mean_im = floquet.mean_im_quasienergy(spectrum)
    manifest = output.RunManifest(
        command="spectrum",
        parameters={
            "kick_strength": params.kick_strength,
            "lam": params.nonhermiticity,
            "n_sites": params.n_sites,
            "edge_fraction": values["edge_fraction"],
            "mean_abs_im_unflagged": mean_im,
            **_beta_report(params),
        },
        timings=timer.timings,
    )
    _finish(manifest, out_dir, "spectrum", written)
    print(
        f"spectrum: {spectrum.n_modes} modes, "
        f"{int(spectrum.edge_flagged.sum())} edge-flagged, "
        f"mean |Im epsT| (unflagged) = {mean_im:.6e}"
    )
    return 0


# ------------------------------------------------------------------ threshold


THRESHOLD_OPTIONS = (
    Option("kick_strength", float, None, "kick strength", "--K"),
    Option("beta", parse_beta, None, "single beta (decimal, N/M or x/2pi)"),
    Option("two_pi_beta", parse_float_list, None,
           "comma list of 2*pi*beta values to scan"),
    Option("beta_rational", parse_rational_list, None,
           "comma list of exact rational betas"),
    Option("n_sites", int, 500, "momentum truncation", "--Ns"),
    Option("eta", float, floquet.DEFAULT_ETA, "detector threshold on mean |Im epsT|"),
    Option("lambda_tol", float, floquet.DEFAULT_LAMBDA_TOL, "bisection tolerance"),
    Option("bracket", parse_float_list, list(floquet.DEFAULT_BRACKET),
           "search bracket 'lo,hi'"),
    Option("coarse_points", int, 5, "coarse-scan points before bisection"),
    Option("edge_fraction", float, floquet.DEFAULT_EDGE_FRACTION, ""),
    Option("q_points", int, 64, "band detector q-grid (rational beta)"),
    Option("workers", int, 0, "parallel workers over beta points (0 = auto)"),
)


def cmd_threshold(args, parser):
    values = _resolve(args, THRESHOLD_OPTIONS)
    _require(parser, values, ("kick_strength",))
    beta_specs = []
    if values.get("two_pi_beta") is not None:
        beta_specs += [
            ("real", v / (2.0 * math.pi))
            for v in parse_float_list(values["two_pi_beta"])
        ]
    if values.get("beta") is not None:
        beta_specs.append(values["beta"])
    if values.get("beta_rational") is not None:
        beta_specs.extend(parse_rational_list(values["beta_rational"]))
    if not beta_specs:
        parser.error("specify at least one beta via --beta/--two-pi-beta/--beta-rational")
    # deterministic merge order: sorted by the kinetic parameter
    beta_specs.sort(key=lambda s: s[1] / s[2] if s[0] == "rational" else s[1])
    bracket = tuple(values["bracket"])
    if len(bracket) != 2:
        parser.error("--bracket needs 'lo,hi'")
    sizes = [values["n_sites"]]
    if args.check_convergence:
        sizes.append(2 * values["n_sites"])

    def run_one(spec, n_sites):
        template = _make_params(spec, values["kick_strength"], 0.0, n_sites)
        result = floquet.pt_threshold(
            template,
            eta=values["eta"],
            lambda_tol=values["lambda_tol"],
            bracket=bracket,
            coarse_points=values["coarse_points"],
            edge_fraction=values["edge_fraction"],
            band_q_count=values["q_points"],
        )
        return template, result

    jobs = [(spec, ns) for spec in beta_specs for ns in sizes]
    workers = values["workers"] or min(len(jobs), os.cpu_count() or 1)
    timer = output.StageTimer()
    with timer.stage("scan"):
        if workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda j: run_one(*j), jobs))
        else:
            results = [run_one(*job) for job in jobs]
    out_dir = _out_dir(args)
    written = []
    summary_rows = []
    exit_code = 0
    with timer.stage("write"):
        for idx, ((spec, ns), (template, result)) in enumerate(zip(jobs, results)):
            scan_name = f"threshold_scan_{idx:02d}.csv"
            written.append(
                output.write_csv(
                    out_dir / scan_name,
                    ("lambda", "mean_abs_im"),
                    result.scan,
                )
            )
            summary_rows.append(
                (
                    template.beta,
                    2.0 * math.pi * template.beta,
                    ns,
                    result.lambda_pt,
                    result.status,
                    scan_name,
                )
            )
        written.insert(
            0,
            output.write_csv(
                out_dir / "threshold.csv",
                ("beta", "two_pi_beta", "n_sites", "lambda_pt", "status", "scan_file"),
                summary_rows,
            ),
        )
    if args.check_convergence:
        for spec in beta_specs:
            pair = [r.lambda_pt for (s, ns), (_, r) in zip(jobs, results) if s == spec]
            delta = abs(pair[0] - pair[1])
            print(f"convergence: lambda_pt moved {delta:.4f} doubling n_sites")
            if delta >= 0.02:
                print("convergence check FAILED (moved >= 0.02)", file=sys.stderr)
                exit_code = 1
    if not args.no_plot:
        from . import plots

        with timer.stage("plot"):
            base_results = [
                (2.0 * math.pi * t.beta, r)
                for (spec, ns), (t, r) in zip(jobs, results)
                if ns == values["n_sites"]
            ]
            written.append(plots.plot_threshold(base_results, out_dir / "threshold.png"))
    manifest = output.RunManifest(
        command="threshold",
        parameters={
            "kick_strength": values["kick_strength"],
            "eta": values["eta"],
            "lambda_tol": values["lambda_tol"],
            "bracket": list(bracket),
            "coarse_points": values["coarse_points"],
            "edge_fraction": values["edge_fraction"],
            "n_sites": sizes,
            "workers": workers,
            "betas": [
                {"beta": t.beta, "two_pi_beta": 2.0 * math.pi * t.beta,
                 "n_sites": ns, "lambda_pt": r.lambda_pt, "status": r.status}
                for (spec, ns), (t, r) in zip(jobs, results)
            ],
        },
        timings=timer.timings,
    )
    _finish(manifest, out_dir, "threshold", written)
    for beta_v, two_pi_b, ns, lambda_pt, status, _ in summary_rows:
        print(
            f"threshold: 2*pi*beta={two_pi_b:.6g} n_sites={ns} "
            f"lambda_pt={lambda_pt:.4f} ({status})"
        )
    return exit_code


# ------------------------------------------------------------------ bands


BANDS_OPTIONS = _rotor_options(n_sites=8) + (
    Option("q_points", int, 201, "Bloch-number grid size"),
)


def cmd_bands(args, parser):
    values = _resolve(args, BANDS_OPTIONS)
    _require(parser, values, ("kick_strength",))
    beta_spec = _beta_spec(parser, values)
    if beta_spec[0] != "rational":
        parser.error("bands require an exact rational beta (--beta-rational N/M)")
    params = _make_params(beta_spec, values["kick_strength"], values["lam"], values["n_sites"])
    out_dir = _out_dir(args)
    timer = output.StageTimer()
    with timer.stage("bands"):
        bands = floquet.resonance_bands(params, values["q_points"])
    with timer.stage("write"):
        rows = [
            (q, band, bands.eps_t[iq, band].real, bands.eps_t[iq, band].imag)
            for iq, q in enumerate(bands.q_grid)
            for band in range(bands.denom)
        ]
        written = [
            output.write_csv(
                out_dir / "bands.csv", ("q", "band", "re_epsT", "im_epsT"), rows
            )
        ]
    if not args.no_plot:
        from . import plots

        with timer.stage("plot"):
            written.append(plots.plot_bands(bands, out_dir / "bands.png"))
    manifest = output.RunManifest(
        command="bands",
        parameters={
            "kick_strength": params.kick_strength,
            "lam": params.nonhermiticity,
            "q_points": values["q_points"],
            "mean_abs_im": bands.mean_abs_im(),
            **_beta_report(params),
        },
        timings=timer.timings,
    )
    _finish(manifest, out_dir, "bands", written)
    print(
        f"bands: {bands.denom} bands on {values['q_points']} q-points, "
        f"mean |Im epsT| = {bands.mean_abs_im():.6e}"
    )
    return 0


# ------------------------------------------------------------------ evolve


EVOLVE_OPTIONS = _rotor_options() + (
    Option("kicks", int, 1000, "number of kicks"),
    Option("snapshots", parse_int_list, None,
           "comma list of kick numbers for |psi_l|^2 snapshots"),
)


def cmd_evolve(args, parser):
    values = _resolve(args, EVOLVE_OPTIONS)
    _require(parser, values, ("kick_strength",))
    beta_spec = _beta_spec(parser, values)
    params = _make_params(beta_spec, values["kick_strength"], values["lam"], values["n_sites"])
    out_dir = _out_dir(args)
    timer = output.StageTimer()
    with timer.stage("evolve"):
        series = dynamics.evolve(params, values["kicks"], snapshot_kicks=values["snapshots"])
    with timer.stage("write"):
        written = [
            output.write_csv(
                out_dir / "evolve.csv",
                ("n", "P", "mean_l", "spread", "raw_spread"),
                zip(series.kicks, series.norm, series.mean_l, series.spread, series.raw_spread),
            )
        ]
        momenta = np.arange(-params.n_sites, params.n_sites + 1)
        for kick in sorted(series.snapshots):
            written.append(
                output.write_csv(
                    out_dir / f"evolve_snapshot_n{kick}.csv",
                    ("l", "abs2"),
                    zip(momenta, series.snapshots[kick]),
                )
            )
    if not args.no_plot:
        from . import plots

        with timer.stage("plot"):
            written.append(plots.plot_evolution(series, out_dir / "evolve.png"))
    manifest = output.RunManifest(
        command="evolve",
        parameters={
            "kick_strength": params.kick_strength,
            "lam": params.nonhermiticity,
            "n_sites": params.n_sites,
            "kicks": values["kicks"],
            "snapshots": sorted(series.snapshots),
            **_beta_report(params),
        },
        timings=timer.timings,
    )
    _finish(manifest, out_dir, "evolve", written)
    n_final = values["kicks"]
    print(
        f"evolve: {n_final} kicks, P({n_final}) = {series.norm[-1]:.6e}, "
        f"<l> = {series.mean_l[-1]:.4f}, <dl> = {series.spread[-1]:.4f}"
    )
    return 0


# ------------------------------------------------------------------ resonance


RESONANCE_OPTIONS = (
    Option("kick_strength", float, None, "kick strength", "--K"),
    Option("lam", float, 0.0, "non-Hermiticity", "--lambda"),
    Option("kicks", int, 200, "kick count for the profile comparison"),
    Option("q_points", int, 513, "dispersion sampling grid"),
    Option("n_sites", int, None, "momentum range (default sized to the drift)", "--Ns"),
)


def cmd_resonance(args, parser):
    values = _resolve(args, RESONANCE_OPTIONS)
    _require(parser, values, ("kick_strength",))
    n_sites = values["n_sites"]
    if n_sites is None:
        n_sites = int(3 * values["kick_strength"] * values["kicks"]) + 200
    params = model.RotorParams(
        values["kick_strength"], values["lam"], beta=1.0, n_sites=n_sites
    )
    out_dir = _out_dir(args)
    timer = output.StageTimer()
    with timer.stage("dispersion"):
        disp = resonance.dispersion(params, values["q_points"])
    with timer.stage("profile"):
        psi = resonance.exact_resonance_state(params, values["kicks"])
        exact_abs2 = np.abs(psi) ** 2
        momenta = np.arange(-n_sites, n_sites + 1)
        if params.nonhermiticity > 0.0 and values["kicks"] >= 1:
            asym = resonance.asymptotic_profile(params, momenta, values["kicks"])
        else:
            asym = np.zeros_like(exact_abs2)
    with timer.stage("write"):
        written = [
            output.write_csv(
                out_dir / "dispersion.csv",
                ("q", "re_eps", "im_eps"),
                zip(disp.q_grid, disp.eps_t.real, disp.eps_t.imag),
            ),
            output.write_csv(
                out_dir / "resonance_profile.csv",
                ("l", "abs2_exact", "abs2_asymptotic"),
                zip(momenta, exact_abs2, asym),
            ),
        ]
    if not args.no_plot:
        from . import plots

        with timer.stage("plot"):
            written.append(
                plots.plot_resonance(
                    disp, momenta, exact_abs2, asym, values["kicks"],
                    out_dir / "resonance.png",
                )
            )
    manifest = output.RunManifest(
        command="resonance",
        parameters={
            "kick_strength": params.kick_strength,
            "lam": params.nonhermiticity,
            "kicks": values["kicks"],
            "q_points": values["q_points"],
            "n_sites": n_sites,
            "group_velocity": disp.group_velocity,
            "max_growth": disp.max_growth,
        },
        timings=timer.timings,
    )
    _finish(manifest, out_dir, "resonance", written)
    print(
        f"resonance: v_g = {disp.group_velocity:.6f}, max growth = "
        f"{disp.max_growth:.6f} per kick, profile at n = {values['kicks']}"
    )
    return 0


# ------------------------------------------------------------------ cavity


CAVITY_OPTIONS = (
    Option("amplitude", float, None, "grating phase depth A (radians)", "--A"),
    Option("lam", float, 0.0, "loss-to-phase ratio", "--lambda"),
    Option("beta", parse_beta, None, "L / L_Talbot (decimal, N/M or x/2pi)"),
    Option("two_pi_beta", float, None, "2*pi*beta convention"),
    Option("beta_rational", parse_rational, None, "exact rational beta"),
    Option("mirror_spacing", parse_length, None, "mirror spacing (overrides beta)"),
    Option("period", parse_length, 300e-6, "grating period a"),
    Option("wavelength", parse_length, 780e-9, "probe wavelength"),
    Option("focal", parse_length, 5e-2, "far-field lens focal length"),
    Option("waist", parse_length, None, "Gaussian waist w0 (length)"),
    Option("waist_periods", float, 100.0 / math.pi, "w0 in units of the period"),
    Option("trips", int, 20, "round trips to simulate"),
    Option("samples_per_period", int, cavity.DEFAULT_SAMPLES_PER_PERIOD,
           "transverse grid samples per grating period"),
    Option("extent_waists", float, cavity.DEFAULT_EXTENT_WAISTS,
           "window width in units of w0"),
)


def cmd_cavity(args, parser):
    values = _resolve(args, CAVITY_OPTIONS)
    _require(parser, values, ("amplitude",))
    if values["mirror_spacing"] is not None:
        beta = values["mirror_spacing"] * values["wavelength"] / values["period"] ** 2
    else:
        beta_spec = _beta_spec(parser, values)
        beta = (
            beta_spec[1] / beta_spec[2] if beta_spec[0] == "rational" else beta_spec[1]
        )
    waist = values["waist"] or values["waist_periods"] * values["period"]
    config = cavity.CavityConfig.from_beta(
        beta=beta,
        grating_amplitude=values["amplitude"],
        loss_ratio=values["lam"],
        grating_period=values["period"],
        wavelength=values["wavelength"],
        lens_focal=values["focal"],
        beam_waist=waist,
        round_trips=values["trips"],
        samples_per_period=values["samples_per_period"],
        extent_waists=values["extent_waists"],
    )
    out_dir = _out_dir(args)
    timer = output.StageTimer()
    with timer.stage("roundtrips"):
        run = cavity.run_decay(config)
    written = []
    with timer.stage("write"):
        written.append(
            output.write_csv(
                out_dir / "cavity.csv",
                ("n", "power", "meanX_over_spacing", "stdX_over_spacing"),
                zip(run.trips, run.power, run.mean_x, run.std_x),
            )
        )
        for trip in (0, config.round_trips):
            ff = run.far_fields[trip]
            written.append(
                output.write_csv(
                    out_dir / f"cavity_farfield_n{trip}.csv",
                    ("X", "intensity"),
                    zip(ff.positions, ff.intensity),
                )
            )
        written.append(
            output.write_json(out_dir / "cavity_units.json",
                              cavity.physical_units(config).as_dict())
        )
    equivalence = None
    if args.check_rotor:
        with timer.stage("equivalence"):
            order_reach = int(
                math.floor(run.far_fields[0].positions[-1] / config.peak_spacing)
            )
            series = cavity.matched_rotor_series(config, n_sites=max(order_reach + 20, 80))
            equivalence = cavity.rotor_equivalence(run, series)
        written.append(
            output.write_csv(
                out_dir / "cavity_equivalence.csv",
                ("n", "worst_rel_error", "centroid_distance"),
                zip(
                    equivalence.trips,
                    equivalence.worst_relative_error,
                    equivalence.centroid_distance,
                ),
            )
        )
    if not args.no_plot:
        from . import plots

        with timer.stage("plot"):
            written.append(plots.plot_cavity(run, out_dir / "cavity.png"))
    parameters = {
        "amplitude": config.grating_amplitude,
        "lam": config.loss_ratio,
        "beta": config.beta,
        "gamma": config.gamma,
        "period_m": config.grating_period,
        "wavelength_m": config.wavelength,
        "mirror_spacing_m": config.mirror_spacing,
        "focal_m": config.lens_focal,
        "waist_m": config.beam_waist,
        "grid_points": config.grid_points,
        "grid_extent_m": config.grid_extent,
        "trips": config.round_trips,
    }
    if equivalence is not None:
        parameters["equivalence_max_rel_error"] = equivalence.max_relative_error
        parameters["equivalence_max_centroid"] = equivalence.max_centroid_distance
    manifest = output.RunManifest(
        command="cavity", parameters=parameters, timings=timer.timings
    )
    _finish(manifest, out_dir, "cavity", written)
    print(
        f"cavity: {config.round_trips} trips, power ratio "
        f"{run.power[-1] / run.power[0]:.4e}, <X> drift "
        f"{run.mean_x[-1]:.3f} spacings"
    )
    if equivalence is not None:
        print(
            f"cavity-rotor equivalence: max peak error "
            f"{equivalence.max_relative_error:.2%}, max centroid distance "
            f"{equivalence.max_centroid_distance:.3f} spacings"
        )
    return 0


# ------------------------------------------------------------------ verify


def cmd_verify(args, parser):
    results = verify_mod.run_checks(args.level)
    out_dir = _out_dir(args)
    payload = []
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} ({res.seconds:.2f}s): {res.detail}")
        payload.append(
            {
                "name": res.name,
                "passed": res.passed,
                "detail": res.detail,
                "seconds": res.seconds,
            }
        )
        failed += 0 if res.passed else 1
    output.write_json(out_dir / "verify_report.json", {"level": args.level, "checks": payload})
    print(f"verify: {len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


# ------------------------------------------------------------------ wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ptrotor",
        description="PT-symmetric kicked-rotor toolkit: spectra, thresholds, "
        "kick dynamics, resonance analytics and the cavity analogue.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=".", help="output directory")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named scenario")
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="quasi-energy spectrum CSV")
    _add_options(p, SPECTRUM_OPTIONS)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("threshold", parents=[common], help="PT-breaking threshold scan")
    _add_options(p, THRESHOLD_OPTIONS)
    p.add_argument("--check-convergence", action="store_true",
                   help="repeat at doubled n_sites and compare")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("bands", parents=[common], help="rational-beta quasi-energy bands")
    _add_options(p, BANDS_OPTIONS)
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("evolve", parents=[common], help="kick-by-kick observables")
    _add_options(p, EVOLVE_OPTIONS)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("resonance", parents=[common],
                       help="main-resonance dispersion and exact profile")
    _add_options(p, RESONANCE_OPTIONS)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("cavity", parents=[common], help="resonator decay dynamics")
    _add_options(p, CAVITY_OPTIONS)
    p.add_argument("--check-rotor", action="store_true",
                   help="also compare far-field peaks against the kick map")
    p.set_defaults(func=cmd_cavity)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    subparser = parser  # parser.error on the top parser is fine for our use
    try:
        return args.func(args, subparser)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
