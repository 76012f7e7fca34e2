"""Command-line front end.

One subcommand per artifact: state profiles, the three transfer
integrations, field maps and streamlines, phasor path sums, the
enhancement factor, and the three experiment models.  Every run writes
the data files plus a manifest of all resolved parameters; deterministic
commands produce byte-identical data across reruns, and seeded Monte
Carlo commands are reproducible from the manifest alone.

Configuration precedence: command-line flags > config-file values >
built-in defaults.  The config file is flat INI, one section per
command:

    [two-atom]
    tau = 2.0
    t-start = -8

Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import dynamics, experiments, fields, output, paths, states
from .constants import PhysicalConstants

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

OUTPUT_DIR_ENV = "HANDSHAKE_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _use_color(args) -> bool:
    if getattr(args, "no_color", False):
        return False
    if os.environ.get("NO_COLOR"):
        return False
    return sys.stdout.isatty()


def _say(args, message: str) -> None:
    if _use_color(args):
        print(f"\033[32m{message}\033[0m")
    else:
        print(message)


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="handshake",
        description="Two-atom energy-transfer simulator and experiment models")
    parser.add_argument("--config", type=Path, default=None,
                        help="INI config file with one section per command")
    parser.add_argument("--output-dir", type=Path, default=None,
                        help=f"output directory (default ./out, or ${OUTPUT_DIR_ENV})")
    parser.add_argument("--no-color", action="store_true",
                        help="disable ANSI color in messages")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = {}

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--formats", default="csv",
                       help="comma list from csv,binary-grid,png")
        subparsers[name] = p
        return p

    p = add("constants", "physical constants and the transition energy")

    p = add("states", "eigenstate and mixed-state slice profiles")
    p.add_argument("--amp-ground", type=float, default=1 / math.sqrt(2))
    p.add_argument("--amp-excited", type=float, default=1 / math.sqrt(2))
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--time", type=float, default=0.0)
    p.add_argument("--z-max", type=float, default=12.0)
    p.add_argument("--z-points", type=int, default=481)

    p = add("two-atom", "emitter/absorber logistic transfer")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--t-start", type=float, default=-10.0)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--initial-excited", type=float, default=None)
    p.add_argument("--sin-phi", type=float, default=-1.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=1001)

    p = add("compete", "one source, two recipients, second detuned")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--delta-omega", type=float, default=0.3,
                   help="detuning in 1/tau units")
    p.add_argument("--seed1", type=float, default=1e-6)
    p.add_argument("--seed2", type=float, default=1e-6)
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=60.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=2001)

    p = add("cascade", "three-level cascade with shared middle level")
    p.add_argument("--tau-upper", type=float, default=1.5)
    p.add_argument("--tau-lower", type=float, default=1.0)
    p.add_argument("--seed-ground", type=float, default=1e-6)
    p.add_argument("--seed-middle", type=float, default=1e-4)
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=80.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=2001)

    p = add("fieldmap", "total potential over the plane at given times")
    p.add_argument("--separation", type=float, default=12.0)
    p.add_argument("--times", default="0",
                   help="comma list of times in 1/omega0 units")
    p.add_argument("--nx", type=int, default=800)
    p.add_argument("--ny", type=int, default=400)
    p.add_argument("--contours", action="store_true",
                   help="also write zero-crossing polylines")

    p = add("streamlines", "energy-flow streamlines of the averaged field")
    p.add_argument("--separation", type=float, default=12.0)
    p.add_argument("--time", type=float, default=None,
                   help="instantaneous time; omit for the period average")
    p.add_argument("--seeds", default=None,
                   help="semicolon list of x,y seed points")
    p.add_argument("--n-axis-seeds", type=int, default=5)

    p = add("paths", "phasor path sum and 1/r amplitude scan")
    p.add_argument("--distance", type=float, default=1.0)
    p.add_argument("--wavelength", type=float, default=5e-7)
    p.add_argument("--n-paths", type=int, default=4001)
    p.add_argument("--aperture", type=float, default=None,
                   help="transverse half-aperture (default 6 zone widths)")
    p.add_argument("--lens", action="store_true",
                   help="apply the equal-delay lens modifier")
    p.add_argument("--scan", action="store_true",
                   help="also run the amplitude-vs-distance scan")
    p.add_argument("--scan-min", type=float, default=0.1)
    p.add_argument("--scan-max", type=float, default=10.0)
    p.add_argument("--scan-points", type=int, default=21)

    p = add("enhancement", "equal-delay optical enhancement factor")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--wavelength", type=float, default=None,
                   help="default: the 2p->1s wavelength")
    p.add_argument("--solid-angle", type=float, default=1.0)

    p = add("hbt", "two-source coincidence fringe")
    p.add_argument("--d12", type=float, default=1.0)
    p.add_argument("--l", type=float, default=1000.0)
    p.add_argument("--wavelength", type=float, default=5e-7)
    p.add_argument("--dab-max", type=float, default=None,
                   help="scan limit (default two fringe periods)")
    p.add_argument("--points", type=int, default=401)

    p = add("split", "single-photon splitter coincidence histogram")
    p.add_argument("--mean-interval", type=float, default=12e-9)
    p.add_argument("--window", type=float, default=1e-9)
    p.add_argument("--duration", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-loss", type=float, default=0.0)
    p.add_argument("--double-fraction", type=float, default=0.02)

    p = add("fc", "polarization-coincidence curve, both models")
    p.add_argument("--eff-major", type=float, default=1.0)
    p.add_argument("--eff-minor", type=float, default=0.0)
    p.add_argument("--phi-points", type=int, default=91)
    p.add_argument("--mc-samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi", type=float, default=None,
                   help="single angle in degrees; prints the two values")

    return parser, subparsers


def _apply_config(parser, subparsers, argv) -> argparse.Namespace:
    """Resolve flags > config file > defaults."""
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    if not Path(args.config).exists():
        raise UsageError(f"config file not found: {args.config}")
    ini = configparser.ConfigParser()
    ini.read(args.config)
    section = args.command
    if not ini.has_section(section):
        return args
    # figure out which destinations the user pinned on the command line
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=")[0].replace("-", "_"))
    known = {a.dest: a for a in subparsers[args.command]._actions
             if a.dest not in ("help",)}
    for key, raw in ini.items(section):
        dest = key.replace("-", "_")
        if dest not in known:
            accepted = ", ".join(sorted(k.replace("_", "-") for k in known))
            raise UsageError(
                f"unknown key '{key}' in [{section}]; accepted keys: {accepted}")
        if dest in explicit:
            continue
        action = known[dest]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.strip().lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            value = action.type(raw)
        else:
            value = raw
        setattr(args, dest, value)
    return args


def manifest_to_argv(manifest: dict) -> list:
    """Rebuild the command line of a run from its manifest.

    Only keys that are actual parameters of the recorded command are
    used; derived report entries are ignored.  Replaying the returned
    argv (plus an output directory) reproduces the run's data files.
    """
    _, subparsers = _build_parser()
    command = manifest["command"]
    if command not in subparsers:
        raise UsageError(f"manifest names unknown command '{command}'")
    argv = [command]
    dests = {a.dest: a for a in subparsers[command]._actions
             if a.dest != "help"}
    for key, raw in manifest.items():
        if key not in dests or key == "command":
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(dests[key], argparse._StoreTrueAction):
            if str(raw) == "True":
                argv.append(flag)
        else:
            argv.extend([flag, str(raw)])
    return argv


def _resolve_output_dir(args) -> Path:
    if args.output_dir is not None:
        base = args.output_dir
    elif os.environ.get(OUTPUT_DIR_ENV):
        base = Path(os.environ[OUTPUT_DIR_ENV])
    else:
        base = Path("out")
    base.mkdir(parents=True, exist_ok=True)
    return base


def _formats(args) -> set:
    allowed = {"csv", "binary-grid", "png"}
    got = {f.strip() for f in args.formats.split(",") if f.strip()}
    bad = got - allowed
    if bad:
        raise UsageError(f"unknown formats {sorted(bad)}; allowed: {sorted(allowed)}")
    return got


def _manifest(out_dir: Path, name: str, args, extra: dict) -> None:
    entries = {"command": args.command}
    skip = {"command", "config", "output_dir", "no_color"}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        entries[key] = value
    entries.update(extra)
    output.write_manifest(out_dir / f"{name}_manifest.txt", entries)


def _maybe_png(out_dir: Path, name: str, fmts: set, draw) -> None:
    if "png" not in fmts:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig = draw(plt)
    fig.savefig(out_dir / f"{name}.png", dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# command bodies
# ---------------------------------------------------------------------------

def _cmd_constants(args, out_dir: Path, fmts: set) -> None:
    k = PhysicalConstants()
    te = states.transition_energy(k)
    entries = {
        "bohr_radius_a0_m": k.bohr_radius_a0,
        "electron_charge_q_C": k.electron_charge_q,
        "electron_mass_m_kg": k.electron_mass_m,
        "hbar_Js": k.hbar,
        "c_m_per_s": k.c,
        "mu0_H_per_m": k.mu0,
        "eps0_F_per_m": k.eps0,
        "transition_energy_rydberg_eV": te.rydberg_eV,
        "transition_energy_printed_eV": te.printed_eV,
        "transition_energy_discrepant": te.discrepant,
        "omega0_rad_per_s": te.omega0,
        "wavelength_m": te.wavelength_m,
    }
    output.write_manifest(out_dir / "constants.txt", entries, timestamp=False)
    _manifest(out_dir, "constants", args, {})
    for key, value in entries.items():
        print(f"{key} = {value}")


def _cmd_states(args, out_dir: Path, fmts: set) -> None:
    z = np.linspace(-args.z_max, args.z_max, args.z_points)
    norm = math.hypot(args.amp_ground, args.amp_excited)
    state = states.two_state(args.amp_ground / norm, args.amp_excited / norm,
                             args.phase)
    profile = states.mixed_density_slice(state, args.time, z)
    spec = states.QuadratureSpec()
    g = states.ground_state()
    e = states.excited_state()
    d12 = states.dipole_strength(g, e, spec)
    if "csv" in fmts:
        output.write_csv(out_dir / "mixed_density.csv", {
            "z": profile.z, "ground_term": profile.ground,
            "excited_term": profile.excited, "cross_term": profile.cross,
            "total": profile.total})
    checks = {
        "norm_ground": states.norm_integral(g, g, spec).value,
        "norm_excited": states.norm_integral(e, e, spec).value,
        "orthogonality": states.norm_integral(g, e, spec).value,
        "dipole_strength_q_a0": d12.value,
        "dipole_quadrature_error": d12.error_estimate,
        "total_z_integral": float(np.trapezoid(profile.total, profile.z)),
        "reproduces": "two-component slice decomposition",
    }
    _manifest(out_dir, "states", args, checks)
    _maybe_png(out_dir, "mixed_density", fmts, lambda plt: _draw_profile(plt, profile))
    _say(args, f"states: wrote mixed_density (d12 = {d12.value:.6f} q*a0)")


def _draw_profile(plt, profile):
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(profile.z, profile.ground, label="ground term")
    ax.plot(profile.z, profile.excited, label="excited term")
    ax.plot(profile.z, profile.cross, label="cross term")
    ax.plot(profile.z, profile.total, "k", label="total")
    ax.set_xlabel("z [Bohr radii]")
    ax.set_ylabel("slice charge fraction")
    ax.legend()
    fig.tight_layout()
    return fig


def _write_trajectory(args, out_dir: Path, fmts: set, name: str,
                      traj: dynamics.Trajectory, extra: dict) -> None:
    if "csv" in fmts:
        output.write_csv(out_dir / f"{name}.csv", traj.columns())
    meta = dict(extra)
    meta["conservation_defect"] = traj.conservation_defect()
    for key in ("clamp_excess", "clamp_flagged", "nfev"):
        if key in traj.metadata:
            meta[key] = traj.metadata[key]
    _manifest(out_dir, name, args, meta)

    def draw(plt):
        fig, ax = plt.subplots(figsize=(7, 4))
        for key, series in traj.populations.items():
            ax.plot(traj.times, series, label=key)
        ax.plot(traj.times, traj.power, "--", label="power")
        ax.set_xlabel("t [tau]")
        ax.legend(fontsize=8)
        fig.tight_layout()
        return fig

    _maybe_png(out_dir, name, fmts, draw)


def _cmd_two_atom(args, out_dir: Path, fmts: set) -> None:
    scenario = dynamics.TwoAtomScenario(
        tau=args.tau, t_span=(args.t_start, args.t_end),
        initial_excited=args.initial_excited, sin_phi=args.sin_phi)
    traj = dynamics.integrate_two_atom(scenario, tol=args.tol,
                                       n_samples=args.samples)
    _write_trajectory(args, out_dir, fmts, "two_atom", traj,
                      {"reproduces": "logistic amplitude transfer"})
    _say(args, f"two-atom: final emitter excitation "
               f"{traj.populations['emitter_excited'][-1]:.3e}")


def _cmd_compete(args, out_dir: Path, fmts: set) -> None:
    scenario = dynamics.CompetitionScenario(
        tau=args.tau, detuning=args.delta_omega,
        seeds=(args.seed1, args.seed2),
        t_span=(args.t_start, args.t_end))
    traj = dynamics.integrate_competition(scenario, tol=args.tol,
                                          n_samples=args.samples)
    r1 = traj.populations["recipient1_excited"][-1]
    r2 = traj.populations["recipient2_excited"][-1]
    _write_trajectory(args, out_dir, fmts, "compete", traj,
                      {"reproduces": "recipient competition",
                       "final_recipient1": r1, "final_recipient2": r2})
    _say(args, f"compete: final recipients {r1:.4f} / {r2:.4f}")


def _cmd_cascade(args, out_dir: Path, fmts: set) -> None:
    initial = (args.seed_ground, args.seed_middle,
               1.0 - args.seed_ground - args.seed_middle)
    scenario = dynamics.CascadeScenario(
        tau_upper=args.tau_upper, tau_lower=args.tau_lower,
        initial=initial, t_span=(args.t_start, args.t_end))
    traj = dynamics.integrate_cascade(scenario, tol=args.tol,
                                      n_samples=args.samples)
    t = traj.times
    peak_upper = float(t[np.argmax(traj.series["upper_envelope"])])
    peak_lower = float(t[np.argmax(traj.series["lower_envelope"])])
    _write_trajectory(args, out_dir, fmts, "cascade", traj,
                      {"reproduces": "three-level cascade",
                       "upper_envelope_peak_t": peak_upper,
                       "lower_envelope_peak_t": peak_lower,
                       "final_ground": traj.populations["ground_pop"][-1]})
    _say(args, f"cascade: envelope peaks at {peak_upper:.2f} then {peak_lower:.2f}")


def _cmd_fieldmap(args, out_dir: Path, fmts: set) -> None:
    times = tuple(float(v) for v in str(args.times).split(","))
    cfg = fields.HandshakeFieldConfig(separation=args.separation,
                                      times=times, nx=args.nx, ny=args.ny)
    movie = fields.field_movie(cfg)
    for k, t in enumerate(movie.times):
        tag = f"fieldmap_{k:03d}"
        if "csv" in fmts:
            output.write_csv(out_dir / f"{tag}.csv",
                             output.grid_to_csv_columns(
                                 movie.x_coords, movie.y_coords,
                                 movie.values[k]))
        if "binary-grid" in fmts:
            output.write_grid_binary(out_dir / f"{tag}.grid",
                                     movie.x_coords, movie.y_coords,
                                     movie.values[k])
        _maybe_png(out_dir, tag, fmts,
                   lambda plt, k=k: _draw_field(plt, movie, k))
    peaks = {f"onaxis_maxima_{k:03d}":
             ",".join(repr(v) for v in movie.onaxis_maxima[k])
             for k in range(len(movie.times))}
    if args.contours:
        contours = fields.zero_crossing_contours(cfg, times[0])
        output.write_polylines_csv(out_dir / "zero_contours.csv",
                                   contours.polylines)
        peaks["n_contours"] = len(contours.polylines)
        peaks["n_saddle_cells"] = len(contours.saddle_cells)
    _manifest(out_dir, "fieldmap", args,
              {"reproduces": "paired-potential interference map", **peaks})
    _say(args, f"fieldmap: wrote {len(movie.times)} frame(s)")


def _draw_field(plt, movie, k):
    fig, ax = plt.subplots(figsize=(8, 4.5))
    v = movie.values[k]
    lim = np.nanpercentile(np.abs(v), 99)
    ax.imshow(v.T, origin="lower", cmap="RdBu_r", vmin=-lim, vmax=lim,
              extent=(movie.x_coords[0], movie.x_coords[-1],
                      movie.y_coords[0], movie.y_coords[-1]))
    ax.set_xlabel("x [wavelength/2pi]")
    ax.set_ylabel("y [wavelength/2pi]")
    fig.tight_layout()
    return fig


def _cmd_streamlines(args, out_dir: Path, fmts: set) -> None:
    cfg = fields.HandshakeFieldConfig(separation=args.separation)
    if args.seeds:
        seeds = []
        for part in args.seeds.split(";"):
            xs, ys = part.split(",")
            seeds.append((float(xs), float(ys)))
    else:
        xs = np.linspace(0.15, 0.85, args.n_axis_seeds) * args.separation
        seeds = [(float(x), 0.0) for x in xs]
    lines = fields.poynting_streamlines(cfg, seeds, t=args.time)
    output.write_polylines_csv(out_dir / "streamlines.csv",
                               [ln.points for ln in lines])
    terms = {f"termination_{i}": ln.termination
             for i, ln in enumerate(lines)}
    _manifest(out_dir, "streamlines", args,
              {"reproduces": "energy-flow stream map", **terms})
    _say(args, "streamlines: " + ", ".join(ln.termination for ln in lines))


def _cmd_paths(args, out_dir: Path, fmts: set) -> None:
    r = args.distance
    zone = paths.contributing_zone_halfwidth(r, args.wavelength)
    aperture = args.aperture if args.aperture else 6.0 * zone
    offsets = np.linspace(-aperture, aperture, args.n_paths)
    delay = paths.equal_delay_modifier(r) if args.lens else None
    ens = paths.PathEnsemble(source=(0.0, 0.0), detector=(r, 0.0),
                             offsets=offsets, wavelength=args.wavelength,
                             delay_fn=delay)
    res = paths.phasor_sum(ens)
    if "csv" in fmts:
        output.write_csv(out_dir / "arrows.csv", {
            "offset": ens.offsets,
            "phase": np.angle(res.arrows),
            "re": res.arrows.real, "im": res.arrows.imag})
        output.write_csv(out_dir / "seahorse.csv", {
            "step": np.arange(len(res.partial_sums)),
            "re": res.partial_sums.real, "im": res.partial_sums.imag})
    report = {
        "resultant_abs": abs(res.resultant),
        "amplitude": res.amplitude,
        "probability": res.probability,
        "zone_halfwidth": zone,
        "reproduces": "head-to-tail phasor construction",
    }
    if args.scan:
        scan = paths.amplitude_vs_distance(
            np.logspace(math.log10(args.scan_min), math.log10(args.scan_max),
                        args.scan_points), wavelength=args.wavelength)
        if "csv" in fmts:
            output.write_csv(out_dir / "amplitude_vs_distance.csv",
                             {"r": scan.r_values, "amplitude": scan.amplitudes})
        report["fit_slope"] = scan.slope
        report["fit_intensity_slope"] = scan.intensity_slope
    _manifest(out_dir, "paths", args, report)
    _say(args, f"paths: |resultant|/N = {res.amplitude:.4f}"
               + (f", slope = {report['fit_slope']:.4f}" if args.scan else ""))


def _cmd_enhancement(args, out_dir: Path, fmts: set) -> None:
    wavelength = args.wavelength
    if wavelength is None:
        wavelength = states.transition_energy().wavelength_m
    factor = paths.enhancement_factor(args.r, wavelength, args.solid_angle)
    tau_free = dynamics.transition_time(args.r)
    tau_optics = dynamics.transition_time(args.r, solid_angle=args.solid_angle)
    entries = {
        "enhancement_factor": factor,
        "wavelength_m": wavelength,
        "transfer_time_free_s": tau_free,
        "transfer_time_with_optics_s": tau_optics,
        "reproduces": "equal-delay optical enhancement",
    }
    _manifest(out_dir, "enhancement", args, entries)
    print(f"enhancement_factor = {factor!r}")
    print(f"transfer_time_free_s = {tau_free!r}")
    print(f"transfer_time_with_optics_s = {tau_optics!r}")


def _cmd_hbt(args, out_dir: Path, fmts: set) -> None:
    period = args.wavelength * args.l / args.d12
    dab_max = args.dab_max if args.dab_max else 2.0 * period
    dab = np.linspace(0.0, dab_max, args.points)
    rate = np.array([experiments.hbt_coincidence_rate(
        experiments.HbtGeometry(args.d12, d, args.l, args.wavelength))
        for d in dab])
    if "csv" in fmts:
        output.write_csv(out_dir / "hbt_curve.csv",
                         {"dAB": dab, "rate": rate},
                         header={"d12": args.d12, "L": args.l,
                                 "wavelength": args.wavelength})
    _manifest(out_dir, "hbt", args, {
        "rate_at_zero": rate[0], "fringe_period": period,
        "reproduces": "two-source coincidence fringe"})
    _say(args, f"hbt: rate(0) = {rate[0]:.3f}, fringe period = {period:.4e}")


def _cmd_split(args, out_dir: Path, fmts: set) -> None:
    stream = experiments.EmitterStream(
        mean_interval=args.mean_interval, window=args.window,
        duration=args.duration, rng_seed=args.seed, p_loss=args.p_loss,
        double_fraction=args.double_fraction)
    result = experiments.split_photon_run(stream)
    if "csv" in fmts:
        output.write_csv(out_dir / "split_histogram.csv",
                         {"delay": result.delay_bins,
                          "count": result.counts},
                         header={"seed": args.seed,
                                 "mean_interval": args.mean_interval,
                                 "window": args.window,
                                 "duration": args.duration,
                                 "p_loss": args.p_loss,
                                 "double_fraction": args.double_fraction})
    _manifest(out_dir, "split", args, {
        "n_emitted": result.n_emitted,
        "n_detected_a": result.n_detected_a,
        "n_detected_b": result.n_detected_b,
        "n_lost": result.n_lost,
        "zero_delay_count": result.zero_delay_count,
        "plateau_level": result.plateau_level,
        "accidental_expectation": result.accidental_expectation,
        "reproduces": "antibunched splitter histogram"})
    _say(args, f"split: zero-delay {result.zero_delay_count} vs plateau "
               f"{result.plateau_level:.1f}")


def _cmd_fc(args, out_dir: Path, fmts: set) -> None:
    base = experiments.PolarimeterPair(
        eff_major=(args.eff_major, args.eff_major),
        eff_minor=(args.eff_minor, args.eff_minor))
    if args.phi is not None:
        phi = math.radians(args.phi)
        pair = experiments.PolarimeterPair(
            theta1=0.0, theta2=phi,
            eff_major=base.eff_major, eff_minor=base.eff_minor)
        ti = experiments.fc_coincidence_ti(pair)
        mc = experiments.fc_coincidence_classical(
            pair, samples=args.mc_samples, rng_seed=args.seed)
        _manifest(out_dir, "fc", args, {
            "phi_deg": args.phi, "locked_axis": ti,
            "shared_random_axis_mc": mc,
            "reproduces": "polarization-coincidence point"})
        print(f"locked_axis = {ti!r}")
        print(f"shared_random_axis_mc = {mc!r}")
        return
    phi = np.linspace(0.0, math.pi / 2.0, args.phi_points)
    table = experiments.fc_curve(base, phi)
    if "csv" in fmts:
        output.write_csv(out_dir / "fc_curve.csv", {
            "phi_deg": np.degrees(table["phi"]),
            "locked_axis": table["locked_axis"],
            "shared_random_axis": table["shared_random_axis"]},
            header={"eff_major": args.eff_major,
                    "eff_minor": args.eff_minor})
    _manifest(out_dir, "fc", args, {
        "locked_axis_at_90": table["locked_axis"][-1],
        "shared_random_axis_at_90": table["shared_random_axis"][-1],
        "reproduces": "polarization-coincidence curve"})
    _say(args, f"fc: at 90 deg locked-axis = {table['locked_axis'][-1]:.3e}, "
               f"shared-axis = {table['shared_random_axis'][-1]:.3f}")


_COMMANDS = {
    "constants": _cmd_constants,
    "states": _cmd_states,
    "two-atom": _cmd_two_atom,
    "compete": _cmd_compete,
    "cascade": _cmd_cascade,
    "fieldmap": _cmd_fieldmap,
    "streamlines": _cmd_streamlines,
    "paths": _cmd_paths,
    "enhancement": _cmd_enhancement,
    "hbt": _cmd_hbt,
    "split": _cmd_split,
    "fc": _cmd_fc,
}


def main(argv=None) -> int:
    parser, subparsers = _build_parser()
    try:
        args = _apply_config(parser, subparsers,
                             argv if argv is not None else sys.argv[1:])
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out_dir = _resolve_output_dir(args)
        fmts = _formats(args)
        _COMMANDS[args.command](args, out_dir, fmts)
    except (dynamics.IntegrationError, paths.SamplingError,
            FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
