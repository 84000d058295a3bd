import argparse
import logging
import sys

from src.algorithms.inequalities import SUITE_TRIALS
from src.algorithms.schemes import SCHEMES
from src.controllers.experiment_controller import EXIT_USAGE, RunConfig, run
from src.models.errors import LabError
from src.models.streams import DEFAULT_SEED, SEED_ENV_VAR, default_seed


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help=f"64-bit stream seed (default {DEFAULT_SEED}, or ${SEED_ENV_VAR})")
    parser.add_argument("--out", dest="output_path", default=None, help="CSV output file (default stdout)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")


def _add_grid(parser, start, stop, step):
    parser.add_argument("--config", dest="config_path", required=True, help="channel configuration file")
    parser.add_argument("--snr-db-start", type=float, default=start)
    parser.add_argument("--snr-db-stop", type=float, default=stop)
    parser.add_argument("--snr-db-step", type=float, default=step)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="csitlab",
        description="Sum-rate bounds and entropy inequalities for the two-antenna fading broadcast channel.",
    )
    subcommands = parser.add_subparsers(dest="subcommand", required=True)

    maxent = subcommands.add_parser("maxent", help="solve the max-entropy angle problem")
    maxent.add_argument("--gamma", type=float, nargs="+", required=True)
    _add_common(maxent)

    constants = subcommands.add_parser("constants", help="print the derived universal constants")
    _add_common(constants)

    verify = subcommands.add_parser("verify", help="run a randomized inequality suite")
    verify.add_argument("--lemma", type=int, required=True, choices=sorted(SUITE_TRIALS))
    verify.add_argument("--trials", type=int, default=None)
    _add_common(verify)

    bound = subcommands.add_parser("bound", help="evaluate the sum-rate upper bound over an snr grid")
    _add_grid(bound, 0.0, 120.0, 10.0)
    _add_common(bound)

    sim = subcommands.add_parser("sim", help="simulate an achievable scheme over an snr grid")
    sim.add_argument("--scheme", required=True, choices=SCHEMES)
    sim.add_argument("--power-split", type=float, default=None)
    sim.add_argument("--mc", type=int, default=None, help="Monte-Carlo draws per snr point")
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--progress", action="store_true")
    _add_grid(sim, 0.0, 100.0, 10.0)
    _add_common(sim)

    report = subcommands.add_parser("report", help="run the reduced acceptance battery")
    report.add_argument("--config", dest="config_path", default=None)
    _add_common(report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s - %(module)s - %(message)s",
    )

    options = {key: value for key, value in vars(args).items()
               if key not in ("subcommand", "config_path", "seed", "output_path", "verbose")}
    try:
        run_config = RunConfig(
            subcommand=args.subcommand,
            config_path=getattr(args, "config_path", None),
            seed=args.seed if args.seed is not None else default_seed(),
            output_path=args.output_path,
            options=options,
        )
    except (LabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(run_config)


if __name__ == "__main__":
    sys.exit(main())
