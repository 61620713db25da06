"""Command-line interface.

Subcommands: `fig` (figure sweep datasets), `qfi` (single-point Fisher
quantities), `lindblad` (open-system QFI fraction), `sense` (SI
sensitivity).  Exit codes: 0 success, 2 invalid configuration, 3
tolerance/physics failure.  All numbers print with 17 significant digits.
"""

import argparse
import os
import sys

import numpy as np

from . import fisher, harness, lindblad, oracles
from .branches import GHZ, ProbeConfig, evolve

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3

FMT = harness.FMT


class ConfigError(Exception):
    pass


def load_config(path):
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    values = {}
    try:
        with open(path) as f:
            for lineno, raw in enumerate(f, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, val = line.split("=", 1)
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return values


def _apply_config(args, parser_defaults):
    """Overlay config-file values onto argparse defaults (CLI flags win)."""
    if not getattr(args, "config", None):
        return args
    cfg = load_config(args.config)
    for key, raw in cfg.items():
        if not hasattr(args, key):
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(args, key)
        if current != parser_defaults.get(key):
            continue  # explicitly set on the command line
        default = parser_defaults.get(key)
        try:
            if isinstance(default, bool):
                setattr(args, key, raw.lower() in ("1", "true", "yes"))
            elif isinstance(default, int) and not isinstance(default, bool):
                setattr(args, key, int(raw))
            elif isinstance(default, float):
                setattr(args, key, float(raw))
            else:
                setattr(args, key, raw)
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc
    return args


def build_parser():
    p = argparse.ArgumentParser(prog="gravsim",
                                description="conditional-displacement spin-mechanical "
                                            "gravimetry simulator")
    sub = p.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("fig", help="emit figure sweep CSV/JSON datasets")
    fig.add_argument("figure", type=int, choices=list(harness.FIGURE_IDS))
    fig.add_argument("--config", default=None, help="flat key=value config file")
    fig.add_argument("--out", default=".", help="output directory")
    fig.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    fig.add_argument("--no-timestamp", action="store_true",
                     help="suppress the created= header line (byte-stable output)")
    fig.add_argument("--tau-points", type=int, default=601)
    fig.add_argument("--channel-tau-points", type=int, default=61)
    fig.add_argument("--samples", type=int, default=1000)
    fig.add_argument("--g", type=float, default=harness.DEFAULT_G)
    fig.add_argument("--alpha", type=float, default=0.0)
    fig.add_argument("--nu", type=float, default=1e3)

    qfi = sub.add_parser("qfi", help="Fisher quantities at a single parameter point")
    qfi.add_argument("--config", default=None)
    qfi.add_argument("--k", type=float, default=1.0)
    qfi.add_argument("--N", type=int, default=1)
    qfi.add_argument("--tau", type=float, default=2 * np.pi)
    qfi.add_argument("--xi", type=float, default=0.0)
    qfi.add_argument("--alpha", type=float, default=0.0)
    qfi.add_argument("--g", type=float, default=harness.DEFAULT_G)
    qfi.add_argument("--channel", default="qfi",
                     choices=["qfi", "spin", "homodyne", "heterodyne", "photocount"])

    lin = sub.add_parser("lindblad", help="open-system QFI and lossless fraction")
    lin.add_argument("--config", default=None)
    lin.add_argument("--gamma-d", type=float, default=1e-3)
    lin.add_argument("--gamma", type=float, default=1e-3)
    lin.add_argument("--kappa", type=float, default=1e-5)
    lin.add_argument("--nth", type=float, default=10.0)
    lin.add_argument("--N", type=int, default=4)
    lin.add_argument("--k", type=float, default=1.0)
    lin.add_argument("--g", type=float, default=harness.DEFAULT_G)
    lin.add_argument("--tau", type=float, default=2 * np.pi)
    lin.add_argument("--cutoff", type=int, default=30)
    lin.add_argument("--max-step", type=float, default=1.5e-3)

    sense = sub.add_parser("sense", help="predicted SI gravimetry uncertainty")
    sense.add_argument("--config", default=None)
    sense.add_argument("--omega", type=float, default=1e5)
    sense.add_argument("--mass", type=float, default=1e-9)
    sense.add_argument("--N", type=int, default=3)
    sense.add_argument("--nu", type=float, default=1e3)
    sense.add_argument("--k", type=float, default=1.0)
    sense.add_argument("--tau", type=float, default=2 * np.pi)
    sense.add_argument("--xi", type=float, default=0.0)
    return p


def _defaults_for(parser, command):
    sub = next(a for a in parser._subparsers._group_actions).choices[command]
    return {a.dest: a.default for a in sub._actions}


def cmd_fig(args):
    spec = harness.SweepSpec(
        figure=args.figure,
        tau_points=args.tau_points,
        channel_tau_points=args.channel_tau_points,
        samples=args.samples,
        seed=args.seed,
        g=args.g,
        alpha=args.alpha,
        nu=args.nu,
    )
    data = harness.run_figure(args.figure, spec)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, f"fig{args.figure}")
    csv_path = harness.write_csv(data, base + ".csv", timestamp=not args.no_timestamp)
    harness.write_json(data, base + ".json")
    print(f"wrote {csv_path} ({len(data.rows)} rows)")
    return EXIT_OK


def cmd_qfi(args):
    cfg = ProbeConfig(N=args.N, k=args.k, g=args.g, xi=args.xi,
                      alpha=args.alpha, initial_spin=GHZ())
    st = evolve(cfg, args.tau)
    if args.channel == "qfi":
        res = fisher.qfi_pure(st)
    elif args.channel == "spin":
        res = fisher.optimize_spin_angles(st)
    elif args.channel == "homodyne":
        res = fisher.cfi_homodyne(st, sweep_lambda=True)
    elif args.channel == "heterodyne":
        res = fisher.cfi_heterodyne(st)
    else:
        res = fisher.cfi_photocount(st)
    print(f"channel={res.channel}")
    print(f"value={FMT % res.value}")
    if res.value_standard is not None:
        print(f"value_standard={FMT % res.value_standard}")
    if res.angles is not None:
        print(f"theta={FMT % res.angles[0]}")
        print(f"phi={FMT % res.angles[1]}")
    return EXIT_OK


def cmd_lindblad(args):
    from .hilbert import FockSpace

    cfg = ProbeConfig(N=args.N, k=args.k, g=args.g, initial_spin=GHZ())
    params = lindblad.LindbladParams(gamma_d=args.gamma_d, gamma=args.gamma,
                                     kappa=args.kappa, n_th=args.nth)
    res = lindblad.qfi_losses(cfg, params, args.tau,
                              space=FockSpace(args.cutoff), max_step=args.max_step)
    ideal = oracles.qfi_ghz(args.k, args.N, args.tau)
    print(f"qfi_losses={FMT % res.value}")
    print(f"qfi_ideal={FMT % ideal}")
    print(f"fraction={FMT % (res.value / ideal)}")
    print(f"trace_defect={FMT % res.numerics['trace_defect']}")
    if res.numerics["trace_defect"] > 1e-6:
        print("error: trace defect beyond tolerance", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_sense(args):
    dg = oracles.sensitivity(args.omega, args.mass, args.N, args.nu,
                             k=args.k, tau=args.tau, xi=args.xi)
    print(f"delta_g_bar={FMT % dg}")
    print(f"log10_delta_g_bar={FMT % np.log10(dg)}")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches the invalid-config code
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        args = _apply_config(args, _defaults_for(parser, args.command))
        handler = {"fig": cmd_fig, "qfi": cmd_qfi,
                   "lindblad": cmd_lindblad, "sense": cmd_sense}[args.command]
        return handler(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (fisher.GridCoverageError, lindblad.IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
