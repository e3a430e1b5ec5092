"""Command-line front end.

Subcommands: derive | dynamics | budget | mc | sweep.  All file outputs
are deterministic for a fixed config and seed; exit codes are 0 on
success, 2 for config/usage errors, 3 for I/O errors and 4 when a run
would exceed the fast-integrator cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import budget as budget_mod
from . import dynamics as dyn
from . import montecarlo as mc_mod
from .config import RunConfig, load_config, preset_config
from .constants import CGS
from .errors import ConfigError, InvalidParameterError
from .needle import critical_thresholds
from .noise import collision_field_noise, quantum_limit
from .pickup import default_loop, detection_limit, readout_resolution

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_CAP = 4

SWEEP_PARAMETERS = ("length", "radius", "temperature", "gas_density", "flux_sensitivity")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument(
        "--preset",
        default="cobalt-reference",
        help="named preset used when no --config is given (default: cobalt-reference)",
    )
    common.add_argument("--output", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--seed", type=int, help="64-bit seed overriding the config")
    common.add_argument("--quiet", action="store_true", help="suppress summary chatter")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="needlemag",
        description="Precessing ferromagnetic needle magnetometer simulator",
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "derive",
        parents=[common],
        help="derived needle quantities, thresholds and field regime",
    )

    p_dyn = sub.add_parser(
        "dynamics", parents=[common], help="integrate the fast spin-rotor transient"
    )
    p_dyn.add_argument("--duration", type=float, required=True, help="integration time, s")
    p_dyn.add_argument(
        "--initial",
        choices=("locked", "misaligned"),
        default="locked",
        help="start locked along x or with the spin tilted from the axis",
    )
    p_dyn.add_argument(
        "--misalign-angle", type=float, default=0.1, help="initial tilt for --initial misaligned, rad"
    )

    p_budget = sub.add_parser(
        "budget", parents=[common], help="assemble the noise budget over measurement time"
    )
    p_budget.add_argument("--t-min", type=float, default=1.0e-2, help="grid start, s")
    p_budget.add_argument("--t-max", type=float, default=1.0e3, help="grid end, s")
    p_budget.add_argument("--points", type=int, default=200, help="grid points")

    p_mc = sub.add_parser(
        "mc", parents=[common], help="Monte Carlo kick-process random walks"
    )
    p_mc.add_argument(
        "--durations",
        default="1,10,100,1000",
        help="comma-separated walk durations in seconds",
    )
    p_mc.add_argument("--trials", type=int, default=1000, help="trials per duration (>= 100)")

    p_sweep = sub.add_parser(
        "sweep", parents=[common], help="sweep one parameter and tabulate sensitivities"
    )
    p_sweep.add_argument("--parameter", required=True, choices=SWEEP_PARAMETERS)
    p_sweep.add_argument("--values", required=True, help="comma-separated values (cgs/K units)")
    p_sweep.add_argument(
        "--aspect",
        type=float,
        help="for length sweeps: lock radius to length/aspect",
    )
    return parser


def _load_run_config(args) -> RunConfig:
    if args.config:
        return load_config(args.config)
    return preset_config(args.preset)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text, encoding="utf-8")


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def cmd_derive(args) -> int:
    cfg = _load_run_config(args)
    needle = cfg.needle()
    omega_star, b_star = critical_thresholds(needle)
    regime = dyn.classify_regime(cfg.field, needle)
    report = {
        "material": needle.material.name,
        "geometry": {
            "length_cm": needle.geometry.length,
            "radius_cm": needle.geometry.radius,
        },
        "needle": {
            "volume_cm3": needle.volume,
            "mass_g": needle.mass,
            "moment_of_inertia_g_cm2": needle.moment_of_inertia,
            "spin_count": needle.spin_count,
            "total_spin_erg_s": needle.total_spin,
            "magnetic_moment_erg_per_G": needle.magnetic_moment,
            "gamma_g_per_s": needle.gamma_g,
        },
        "thresholds": {"omega_star_per_s": omega_star, "b_star_G": b_star},
        "field_G": list(cfg.field),
        "regime": regime.value,
    }
    _write_text(args.output, json.dumps(report, indent=2))
    return EXIT_OK


def cmd_dynamics(args) -> int:
    cfg = _load_run_config(args)
    needle = cfg.needle()
    overrides = {}
    dyn_doc = cfg.dynamics
    if "anisotropy_field_G" in dyn_doc:
        overrides["anisotropy_field"] = float(dyn_doc["anisotropy_field_G"])
    if "damping" in dyn_doc:
        overrides["damping"] = float(dyn_doc["damping"])
    if "fast_dt_s" in dyn_doc:
        overrides["fast_dt"] = float(dyn_doc["fast_dt_s"])
    if "lock_tolerance" in dyn_doc:
        overrides["lock_tolerance"] = float(dyn_doc["lock_tolerance"])
    if "max_duration_s" in dyn_doc:
        overrides["max_duration"] = float(dyn_doc["max_duration_s"])
    if "sample_every" in dyn_doc:
        overrides["sample_every"] = int(dyn_doc["sample_every"])
    dcfg = dyn.config_for_needle(needle, field=cfg.field, **overrides)
    if args.duration > dcfg.max_duration:
        print(
            f"error: duration {args.duration:g} s exceeds the fast-integrator cap "
            f"({dcfg.max_duration:g} s). The fast integrator is for transients; for "
            "longer times use the locked effective model (budget/mc subcommands or "
            "effective_precession).",
            file=sys.stderr,
        )
        return EXIT_CAP
    if args.initial == "misaligned":
        state0 = dyn.misaligned_state(needle, args.misalign_angle)
    else:
        state0 = dyn.locked_state(needle, (1.0, 0.0, 0.0), field=cfg.field)
    trajectory = dyn.integrate_full(state0, dcfg, needle, args.duration)

    if args.output is None:
        import io

        buf = io.StringIO()
        trajectory.to_csv(buf)
        sys.stdout.write(buf.getvalue())
    else:
        trajectory.to_csv(args.output)
    summary = []
    if args.initial == "misaligned" and len(trajectory) > 4:
        try:
            summary.append(f"locking_rate_per_s={dyn.fit_locking_rate(trajectory):.6e}")
        except InvalidParameterError:
            pass
    if len(trajectory) > 1:
        try:
            summary.append(
                f"precession_frequency_rad_s={dyn.fit_precession_frequency(trajectory):.6e}"
            )
        except InvalidParameterError:
            pass
    if summary:
        _say(args, " ".join(summary))
    return EXIT_OK


def cmd_budget(args) -> int:
    cfg = _load_run_config(args)
    needle = cfg.needle()
    nb = budget_mod.assemble_budget(
        needle, cfg.environment, cfg.pickup, args.t_min, args.t_max, args.points
    )
    fmt = args.format or cfg.output.format
    text = budget_mod.budget_json_text(nb) if fmt == "json" else budget_mod.budget_csv_text(nb)
    _write_text(args.output, text)
    crossing = budget_mod.crossover_time(nb, "detection", "collisions")
    if crossing is None:
        _say(args, "detection/collisions crossover: none within grid")
    else:
        _say(args, f"detection/collisions crossover: {crossing:.4g} s")
    return EXIT_OK


def cmd_mc(args) -> int:
    cfg = _load_run_config(args)
    if args.trials < 100:
        print("error: mc requires at least 100 trials", file=sys.stderr)
        return EXIT_CONFIG
    try:
        durations = [float(v) for v in args.durations.split(",") if v.strip()]
    except ValueError:
        print(f"error: cannot parse durations '{args.durations}'", file=sys.stderr)
        return EXIT_CONFIG
    if not durations:
        print("error: no durations given", file=sys.stderr)
        return EXIT_CONFIG
    needle = cfg.needle()
    process = cfg.kick_process(needle, seed=args.seed)
    summaries = [
        mc_mod.summary_document(process, mc_mod.simulate_walk(process, needle, t, args.trials))
        for t in durations
    ]
    exponent = None
    if process.rate > 0.0 and len(durations) >= 4 and max(durations) / min(durations) >= 100.0:
        try:
            exponent = mc_mod.scaling_exponent(process, needle, durations, args.trials)
        except InvalidParameterError:
            exponent = None
    doc = {"summaries": summaries, "scaling_exponent": exponent}
    _write_text(args.output, json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_run_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        print(f"error: cannot parse values '{args.values}'", file=sys.stderr)
        return EXIT_CONFIG
    if not values:
        print("error: no sweep values given", file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    for value in values:
        rows.append(_sweep_row(cfg, args.parameter, value, args.aspect))
    header = [
        "value",
        "omega_star_per_s",
        "b_star_G",
        "dB_det_1s_G",
        "dB_Q_1s_G",
        "dB_col_1s_G",
        "required_n_cm3",
    ]
    fmt = args.format or "csv"
    if fmt == "json":
        doc = {"parameter": args.parameter, "rows": [dict(zip(header, row)) for row in rows]}
        _write_text(args.output, json.dumps(doc, indent=2))
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(f"{v:.5e}" for v in row))
        _write_text(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def _sweep_row(cfg: RunConfig, parameter: str, value: float, aspect: float | None):
    from .needle import NeedleGeometry, derive_needle
    from .noise import EnvironmentConditions

    geometry = cfg.geometry
    env = cfg.environment
    flux_sensitivity = cfg.pickup.flux_sensitivity
    if parameter == "length":
        radius = value / aspect if aspect else geometry.radius
        geometry = NeedleGeometry(length=value, radius=radius)
    elif parameter == "radius":
        geometry = NeedleGeometry(length=geometry.length, radius=value)
    elif parameter == "temperature":
        env = EnvironmentConditions(
            temperature=value,
            gas_density=env.gas_density,
            gas_mass=env.gas_mass,
            emissivity=env.emissivity,
            relaxation_rate=env.relaxation_rate,
        )
    elif parameter == "gas_density":
        env = EnvironmentConditions(
            temperature=env.temperature,
            gas_density=value,
            gas_mass=env.gas_mass,
            emissivity=env.emissivity,
            relaxation_rate=env.relaxation_rate,
        )
    elif parameter == "flux_sensitivity":
        flux_sensitivity = value

    needle = derive_needle(geometry, cfg.material)
    # the loop tracks the needle: flux-optimal default geometry per length
    loop = default_loop(geometry.length, flux_sensitivity=flux_sensitivity)
    delta_phi = readout_resolution(needle.magnetic_moment, loop)
    db_det = detection_limit(delta_phi, cfg.material.g_factor, 1.0)
    db_q = quantum_limit(needle, env.temperature, 1.0)
    db_col = collision_field_noise(env, needle, 1.0)
    n_req = budget_mod.required_vacuum(needle, env, loop, 1.0)
    return (value, needle.omega_star, needle.b_star, db_det, db_q, db_col, n_req)


_COMMANDS = {
    "derive": cmd_derive,
    "dynamics": cmd_dynamics,
    "budget": cmd_budget,
    "mc": cmd_mc,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
