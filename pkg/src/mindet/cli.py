"""Command-line entry point.

    mindet <experiment> [--config PATH] [--alpha LIST] [--window NAME]
                        [--a F] [--L F] [--N INT] [--hbar F] [--nmax INT]
                        [--out DIR] [--format csv|json]

Flags override the JSON config file, which overrides the canonical defaults;
the MINDET_OUT environment variable supplies the output directory when --out
is absent.  Exit codes: 0 success, 1 verification failure, 2 invalid
configuration, 3 output I/O error.
"""

import argparse
import sys

from .config import VERSION, build_config, load_config_file
from .kernels import backend_choice
from .wavepacket import WINDOW_FAMILIES

EXPERIMENT_HELP = {
    "position-density": "|ψ(x)|² per phase α (must coincide)",
    "momentum-density": "P(p; α) per phase α (must differ)",
    "charfun": "characteristic functions: support, assembly, phase pin",
    "moments": "momentum moments by several routes; cancellation integrals",
    "alpha-expectations": "non-polynomial expectations that do see α",
    "current": "probability current of a chirped superposition",
    "group-delay": "group delay τ(p) versus its closed form",
    "wigner": "phase-space suite: marginals, fluxes, cross terms",
    "multi": "N-lobe fringes and their α-blind moments",
    "observable": "oscillator-level statistics of the superposition",
    "dual": "mirror construction with lobes in momentum space",
    "lognormal": "classical indeterminate family; Krein/Carleman heuristics",
    "criteria": "run the numbered verification criteria (no regression check)",
    "verify": "full verification gate incl. byte-determinism regression",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mindet",
        description="numerical experiments on superpositions whose moments "
                    "cannot see the relative phase")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="experiment", required=True,
                                metavar="experiment")
    for name, blurb in EXPERIMENT_HELP.items():
        sp = sub.add_parser(name, help=blurb)
        sp.add_argument("--config", metavar="PATH",
                        help="JSON config file (flags still win)")
        sp.add_argument("--alpha", metavar="LIST",
                        help="comma-separated phases; accepts pi fractions "
                             "such as 0,pi/4,pi/2,pi")
        sp.add_argument("--window", choices=WINDOW_FAMILIES,
                        help="window family for the lobes")
        sp.add_argument("--a", type=float, metavar="F",
                        help="window extent (support length)")
        sp.add_argument("--L", type=float, metavar="F",
                        help="lobe separation (must exceed a)")
        sp.add_argument("--N", type=int, metavar="INT",
                        help="number of lobes (linear phases when N > 2)")
        sp.add_argument("--hbar", type=float, metavar="F",
                        help="value of ħ")
        sp.add_argument("--nmax", type=int, metavar="INT",
                        help="highest moment order")
        sp.add_argument("--out", metavar="DIR",
                        help="output directory (default MINDET_OUT or ./results)")
        sp.add_argument("--format", choices=("csv", "json"),
                        help="table file format (summary is always JSON)")
    return parser


def _echo_verdicts(bundle, stream):
    for name, v in bundle.verdicts.items():
        status = "PASS" if v["pass"] else "FAIL"
        print(f"{status}  {name}: observed {v['observed']:.6e} "
              f"(threshold {v['threshold']:.6e})", file=stream)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        backend_choice()
        file_data = load_config_file(args.config) if args.config else None
        overrides = {
            "alphas": args.alpha,
            "window": args.window,
            "a": args.a,
            "L": args.L,
            "N": args.N,
            "hbar": args.hbar,
            "n_max": args.nmax,
            "out_dir": args.out,
            "format": args.format,
        }
        cfg = build_config(file_data, overrides)
    except ValueError as exc:
        print(f"mindet: invalid configuration: {exc}", file=sys.stderr)
        return 2
    for note in cfg.snap_notes:
        print(f"mindet: note: {note}", file=sys.stderr)

    try:
        if args.experiment in ("criteria", "verify"):
            from .acceptance import criteria_bundle
            bundle = criteria_bundle(
                cfg, include_determinism=args.experiment == "verify",
                progress=lambda msg: print(f"mindet: {msg}", file=sys.stderr))
        else:
            from .experiments import EXPERIMENTS
            bundle = EXPERIMENTS[args.experiment](cfg)
    except ValueError as exc:
        print(f"mindet: invalid configuration: {exc}", file=sys.stderr)
        return 2

    try:
        from .output import write_bundle
        paths = write_bundle(bundle, cfg.out_dir, cfg.fmt)
    except (IOError, OSError) as exc:
        print(f"mindet: output error: {exc}", file=sys.stderr)
        return 3

    _echo_verdicts(bundle, sys.stdout)
    for note in bundle.notes:
        print(f"note: {note}", file=sys.stdout)
    print(f"wrote {len(paths)} files to {cfg.out_dir}", file=sys.stdout)
    return 0 if bundle.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())
