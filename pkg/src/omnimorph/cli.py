"""Command-line front end: ``omnimorph {analyze,hover,deltam,forceset,simulate,compare}``.

Exit codes: 0 success, 2 usage or configuration error, 3 divergence or
controller fault. ``OMNIMORPH_OUT`` overrides the output directory.
"""

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .actuation import classify_actuation
from .config import ConfigError, load_scenario, preset_scenario
from .controller import WEIGHT_PRESETS, OptWeights
from .dynamics import simulate
from .energy import delta_m_bar, hover_input, motor_power
from .errors import (ControllerFault, HoverDeficitError, InvalidParameterError,
                     SimulationDiverged)
from .geometry import allocation_matrix, layout_for
from .params import PlatformParams
from .trace import summarize, write_trace_csv
from .wrench_sets import DEFAULT_DIRECTIONS, fibonacci_sphere, support_force

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAULT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _out_dir(arg, fallback):
    path = os.environ.get("OMNIMORPH_OUT") or arg or fallback
    os.makedirs(path, exist_ok=True)
    return path


def parse_alpha_list(text):
    """``"0,45,90"`` -> radians. Degrees in [0, 90]."""
    items = [s.strip() for s in text.split(",")]
    if not text.strip() or any(not s for s in items):
        raise UsageError(f"bad alpha list {text!r}")
    return _check_degrees([_float(s) for s in items])


def parse_sweep(text):
    """``"start:step:stop"`` in degrees, stop included -> radians."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"sweep must be start:step:stop, got {text!r}")
    start, step, stop = (_float(s) for s in parts)
    if not step > 0 or stop < start:
        raise UsageError(f"sweep needs step > 0 and stop >= start, got {text!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return _check_degrees(list(start + step * np.arange(count)))


def _float(s):
    try:
        value = float(s)
    except ValueError:
        raise UsageError(f"not a number: {s!r}") from None
    if not np.isfinite(value):
        raise UsageError(f"not a finite number: {s!r}")
    return value


def _check_degrees(values):
    bad = [v for v in values if not 0.0 <= v <= 90.0]
    if bad:
        raise UsageError(f"tilt angles must lie in [0, 90] deg, got {bad}")
    return np.radians(values)


def _alphas(args):
    if args.alpha and args.sweep:
        raise UsageError("give either --alpha or --sweep")
    if args.alpha:
        return parse_alpha_list(args.alpha)
    if args.sweep:
        return parse_sweep(args.sweep)
    raise UsageError("one of --alpha or --sweep is required")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def cmd_analyze(args):
    params = PlatformParams()
    layout = layout_for(params)
    rng = np.random.default_rng(args.seed)
    rows = []
    for alpha in _alphas(args):
        if args.hover:
            u = hover_input(params, layout, alpha)
        else:
            u = rng.uniform(-params.u_max, params.u_max, layout.count)
        cls = classify_actuation(params, layout, alpha, u)
        rows.append((np.degrees(alpha), cls.allocation_rank, cls.rank, cls.tag.value))
    print(f"{'alpha_deg':>9}  {'rank_F1':>7}  {'rank_F':>6}  class")
    for a, r1, r, tag in rows:
        print(f"{a:9.3f}  {r1:7d}  {r:6d}  {tag}")
    if args.csv:
        _write_csv(os.path.join(_out_dir(args.out, "."), args.csv),
                   ["alpha_deg", "rank_F1", "rank_F", "class"], rows)
    if args.plot:
        from .plotting import plot_rank
        plot_rank([r[0] for r in rows], [r[2] for r in rows],
                  os.path.join(_out_dir(args.out, "."), "rank.png"))
    return EXIT_OK


def cmd_hover(args):
    params = PlatformParams()
    layout = layout_for(params)
    mass = params.mass if args.mass is None else args.mass
    if not mass > 0:
        raise UsageError("--mass must be positive")
    rows, code = [], EXIT_OK
    print(f"{'alpha_deg':>9}  " + "  ".join(f"{f'u{i}':>10}" for i in range(1, 9))
          + f"  {'power_W':>9}")
    for alpha in _alphas(args):
        a_deg = float(np.degrees(alpha))
        try:
            u = hover_input(params, layout, alpha, mass)
        except HoverDeficitError as exc:
            print(f"{a_deg:9.3f}  {exc}", file=sys.stderr)
            code = EXIT_FAULT
            continue
        power = motor_power(params, u)
        rows.append((f"{a_deg:g}", *map(repr, map(float, u)), repr(power)))
        print(f"{a_deg:9.3f}  " + "  ".join(f"{x:10.1f}" for x in u) + f"  {power:9.3f}")
    if args.csv:
        _write_csv(os.path.join(_out_dir(args.out, "."), args.csv),
                   ["alpha_deg", *(f"u{i}" for i in range(1, 9)), "power_W"], rows)
    return code


def cmd_deltam(args):
    params = PlatformParams()
    layout = layout_for(params)
    alphas = parse_sweep(args.range)
    if np.any(alphas >= np.radians(90.0)):
        raise UsageError("fixed tilt must stay below 90 deg")
    rows = [(np.degrees(a), delta_m_bar(params, layout, a)) for a in alphas]
    directory = _out_dir(args.out, "deltam")
    path = _write_csv(os.path.join(directory, "delta_m.csv"), ["alpha_f_deg", "delta_m_bar"],
                      [(f"{a:g}", repr(float(d))) for a, d in rows])
    for a, d in rows:
        print(f"{a:8.3f}  {d:.6f}")
    if not args.no_plots:
        from .plotting import plot_delta_m
        plot_delta_m([r[0] for r in rows], [r[1] for r in rows],
                     os.path.join(directory, "delta_m.png"))
    print(f"wrote {path}")
    return EXIT_OK


def cmd_forceset(args):
    params = PlatformParams()
    layout = layout_for(params)
    alphas = _alphas(args)
    if args.n_dirs < 50:
        raise UsageError("--n-dirs must be at least 50")
    zero_torque = not args.no_zero_torque
    directory = _out_dir(args.out, "forceset")
    dirs = fibonacci_sphere(args.n_dirs)
    point_rows, radius_rows, clouds = [], [], {}
    for alpha in alphas:
        A = allocation_matrix(params, layout, alpha)
        support = np.array([support_force(params, layout, alpha, d, zero_torque, A) for d in dirs])
        a_deg = float(np.degrees(alpha))
        point_rows += [(f"{a_deg:g}", *map(repr, map(float, d)), repr(float(s)))
                       for d, s in zip(dirs, support)]
        radius_rows.append((f"{a_deg:g}", repr(float(support.min())),
                            repr(float(support.min() / params.weight))))
        clouds[a_deg] = dirs * support[:, None]
        print(f"{a_deg:8.3f}  radius {support.min():8.4f} N  ({support.min() / params.weight:.3f} mg)")
    _write_csv(os.path.join(directory, "force_set.csv"),
               ["alpha", "dir_x", "dir_y", "dir_z", "support_N"], point_rows)
    _write_csv(os.path.join(directory, "radius.csv"),
               ["alpha", "radius_N", "radius_over_weight"], radius_rows)
    if not args.no_plots:
        from .plotting import plot_force_set, plot_radius
        plot_radius([float(r[0]) for r in radius_rows], [float(r[1]) for r in radius_rows],
                    params.weight, os.path.join(directory, "radius.png"))
        title = "zero torque" if zero_torque else "torque unconstrained"
        plot_force_set(clouds, os.path.join(directory, "force_set.png"), title)
    print(f"wrote {directory}")
    return EXIT_OK


def _apply_overrides(cfg, args):
    sc = cfg.scenario
    changes = {}
    if args.cf_scale is not None:
        if not args.cf_scale > 0:
            raise UsageError("--cf-scale must be positive")
        changes["plant"] = replace(sc.plant, cf_scale=args.cf_scale)
    if args.fixed_alpha is not None:
        changes["fixed_alpha"] = float(_check_degrees([args.fixed_alpha])[0])
    if args.alpha0 is not None:
        changes["alpha0"] = float(_check_degrees([args.alpha0])[0])
    if args.w3 is not None:
        if not args.w3 > 0:
            raise UsageError("--w3 must be positive")
        w = sc.weights
        changes["weights"] = OptWeights(w.W1, w.W2, np.full(8, args.w3))
    if args.duration is not None:
        if not args.duration > 0:
            raise UsageError("--duration must be positive")
        changes["duration"] = args.duration
    if changes:
        cfg.scenario = replace(sc, **changes)
    return cfg


def _load_configs(args):
    configs = [load_scenario(path) for path in args.configs]
    for preset in args.preset or []:
        configs.append(preset_scenario(preset))
    if not configs:
        raise UsageError("give at least one CONFIG or --preset")
    names = [c.name for c in configs]
    for k, cfg in enumerate(configs):
        if names.count(cfg.name) > 1:
            cfg.name = f"{cfg.name}-{k + 1}"
    return [_apply_overrides(c, args) for c in configs]


def _run_one(job):
    """Simulate one scenario into its own directory; returns (name, summary or error, code)."""
    cfg, directory, plots = job
    os.makedirs(directory, exist_ok=True)
    try:
        trace = simulate(cfg.scenario)
    except (SimulationDiverged, ControllerFault) as exc:
        return cfg.name, f"{type(exc).__name__}: {exc}", EXIT_FAULT
    write_trace_csv(trace, os.path.join(directory, "trace.csv"), cfg.columns)
    summary = summarize(trace)
    _write_csv(os.path.join(directory, "summary.csv"), ["quantity", "value"],
               [(k, repr(float(v))) for k, v in summary.rows()])
    if plots:
        from .plotting import plot_trace
        plot_trace(trace, directory, cfg.name)
    return cfg.name, summary, EXIT_OK


def _run_all(configs, args, default_dir):
    root = _out_dir(args.out, default_dir)
    jobs = [(cfg, os.path.join(cfg.directory or root, cfg.name), not args.no_plots)
            for cfg in configs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(job) for job in jobs]


def _print_table(results):
    ok = [(name, s) for name, s, code in results if code == EXIT_OK]
    if ok:
        labels = [label for label, _ in ok[0][1].rows()]
        width = max(len(label) for label in labels)
        print(" " * width + "".join(f"  {name:>16}" for name, _ in ok))
        for k, label in enumerate(labels):
            print(f"{label:<{width}}" + "".join(f"  {s.rows()[k][1]:16.6g}" for _, s in ok))
    for name, err, code in results:
        if code != EXIT_OK:
            print(f"{name}: {err}", file=sys.stderr)


def cmd_simulate(args):
    results = _run_all(_load_configs(args), args, "runs")
    _print_table(results)
    return max(code for _, _, code in results)


def cmd_compare(args):
    if len(args.configs) + len(args.preset or []) != 2:
        raise UsageError("compare needs exactly two scenarios (CONFIG files or --preset)")
    results = _run_all(_load_configs(args), args, "compare")
    _print_table(results)
    return max(code for _, _, code in results)


def _add_alpha_args(p):
    p.add_argument("--alpha", help="comma-separated tilt angles in degrees")
    p.add_argument("--sweep", help="start:step:stop in degrees, stop included")


def _add_sim_args(p, nargs):
    p.add_argument("configs", nargs=nargs, metavar="CONFIG", help="scenario TOML file")
    p.add_argument("--preset", action="append", choices=sorted(WEIGHT_PRESETS),
                   help="built-in weights preset on the default mission (repeatable)")
    p.add_argument("--cf-scale", type=float, help="plant thrust-coefficient multiplier")
    p.add_argument("--fixed-alpha", type=float, help="freeze the tilt at this angle [deg]")
    p.add_argument("--alpha0", type=float, help="initial tilt [deg]")
    p.add_argument("--w3", type=float, help="scalar override of the input-rate weight")
    p.add_argument("--duration", type=float, help="simulated time [s]")
    p.add_argument("--jobs", type=int, default=1, help="parallel scenarios")
    p.add_argument("--out", help="output directory")
    p.add_argument("--no-plots", action="store_true", help="skip PNG figures")


def build_parser():
    parser = _Parser(prog="omnimorph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="actuation rank and class per tilt")
    _add_alpha_args(p)
    p.add_argument("--hover", action="store_true", help="evaluate at the hover input")
    p.add_argument("--seed", type=int, default=0, help="seed of the random test input")
    p.add_argument("--csv", help="also write the table to this file name")
    p.add_argument("--plot", action="store_true", help="write rank.png")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hover", help="hover input and motor power per tilt")
    _add_alpha_args(p)
    p.add_argument("--mass", type=float, help="vehicle mass [kg], default the platform mass")
    p.add_argument("--csv", help="also write the table to this file name")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_hover)

    p = sub.add_parser("deltam", help="break-even mechanism mass versus fixed tilt")
    p.add_argument("--range", default="0:1:60", help="start:step:stop in degrees")
    p.add_argument("--out", help="output directory")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_deltam)

    p = sub.add_parser("forceset", help="feasible-force support and inscribed radius")
    _add_alpha_args(p)
    p.add_argument("--n-dirs", type=int, default=DEFAULT_DIRECTIONS)
    p.add_argument("--no-zero-torque", action="store_true",
                   help="drop the zero-torque constraint (raw force polytope)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_forceset)

    p = sub.add_parser("simulate", help="closed-loop simulation of scenario files or presets")
    _add_sim_args(p, "*")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="two scenarios side by side")
    _add_sim_args(p, "*")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"omnimorph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, InvalidParameterError) as exc:
        print(f"omnimorph: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
