#!/usr/bin/env python3

"""
This script runs the "knotforge" CLI, which is powered by the API that lives in
the "src/app_api" folder on this repo, on top of the exact diagram algebra in
"src/knot_algebra".

For a cleaner experience, add this directory to your PATH, which will allow
you to run the CLI from anywhere, and without preceding the command with
the word "python".
"""

import argparse
import logging
import sys

from src.app_api import log_handling, utils
from src.app_api.golden import golden_check
from src.app_api.report_mgmt import Report, print_report, run, save_report
from src.app_api.run_config import FORMATS, RunConfig
from src.knot_algebra.exceptions import KnotforgeError


PROJECT_ROOT = utils.get_repo_root()
CURRENT_VERSION = "0.4.0"

EXIT_PASS, EXIT_CHECKS_FAILED, EXIT_ERROR = 0, 1, 2


logger = logging.getLogger("knotforge_logger")


# Every command resolves its arguments into a RunConfig (defaults.yaml first,
# then the flags given here), runs, and hands back a Report. main() decides
# how the report is shown and saved, and turns the outcome into an exit code.


##############################################################################
######################## ALGEBRA SUBMODULE FUNCTIONS #########################
##############################################################################


def run_command(args) -> Report:
    """
    Runs any of the algebra commands: quotient, theta, morse, surgery, scheme and diagram.
    Called by e.g. the "knotforge theta verify [-options]" command.

    Parameters:
    -----------
    args: argparse.Namespace
        The arguments and options passed to the CLI.
    """
    config = RunConfig.from_args(args)
    report = run(config)
    if config.output is not None:
        save_report(report, config)
    return report


##############################################################################
######################### GOLDEN SUBMODULE FUNCTIONS #########################
##############################################################################


def golden(args) -> Report:
    """
    Reruns the golden suite and compares every report with its stored expectation.
    Called by the "knotforge golden [--suite DIR] [--regenerate]" command.

    Parameters:
    -----------
    args: argparse.Namespace
        The arguments and options passed to the CLI.
    """
    config = RunConfig.from_args(args)
    report = golden_check(config.params.suite, config.threads, config.params.regenerate)
    if config.output is not None:
        save_report(report, config)
    return report


##############################################################################
################################ ARGUMENTS ###################################
##############################################################################


def common_options() -> argparse.ArgumentParser:
    """
    Flags accepted by every command, before or after the subcommand. Absent flags leave the
    defaults.yaml values in place.
    """
    results_dir = PROJECT_ROOT / utils.read_defaults().get("results_dir", "MyData/TestResults")
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument(
        "-t",
        "--threads",
        type=int,
        help="worker threads for enumeration, relation generation and orbit search",
        dest="threads",
    )
    common.add_argument(
        "-o",
        "--output",
        nargs="?",
        const=str(results_dir),
        help="save the report: a .json file, a directory, or (bare flag) the results directory",
        dest="output",
    )
    common.add_argument(
        "-f",
        "--format",
        choices=FORMATS,
        help="render the report as text tables or canonical JSON",
        dest="fmt",
    )
    common.add_argument(
        "--ihx-sign-convention",
        choices=("A", "B"),
        help="IHX sign toggle (A: I + H + X = 0)",
        dest="ihx_sign",
    )
    common.add_argument(
        "--stu-term-order",
        choices=("A", "B"),
        help="STU term-order toggle (A: S - T + U = 0)",
        dest="stu_order",
    )
    common.add_argument(
        "--verbosity",
        type=int,
        choices=range(len(log_handling.LEVELS)),
        help="console log level, 0 (errors) to 3 (debug); default 2",
        dest="verbosity",
    )
    return common


def add_leaf(subparsers, name: str, help: str, command: str, subcommand, func, common):
    leaf = subparsers.add_parser(name, help=help, parents=[common])
    leaf.set_defaults(func=func, command=command, subcommand=subcommand)
    return leaf


def add_window_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-d", "--degree", type=int, help="diagram degree (1..3)", dest="degree")
    parser.add_argument("-k", "--window", type=int, help="exponent window K", dest="window")
    parser.add_argument(
        "--nh-only", action="store_true", help="only nullhomotopic Wilson loops", dest="nh_only"
    )


def build_parser() -> argparse.ArgumentParser:
    common = common_options()
    parser = argparse.ArgumentParser(
        prog="knotforge",
        description="Exact computations with colored Jacobi diagrams on S^1.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )

    parser.add_argument(
        "--version",
        action="version",
        version=CURRENT_VERSION,
    )

    subparsers = parser.add_subparsers(title="SUBMODULES")

    # parser for "quotient"
    parser_quotient = add_leaf(
        subparsers, "quotient", "basis of the diagram quotient on a window", "quotient", None, run_command, common
    )
    add_window_args(parser_quotient)

    # parser for "theta"
    parser_theta = subparsers.add_parser("theta", help="the degree-1 structure")
    theta_subparsers = parser_theta.add_subparsers(title="THETA MODULE COMMANDS")
    parser_theta_verify = add_leaf(
        theta_subparsers, "verify", "machine-check the degree-1 isomorphism", "theta", "verify", run_command, common
    )
    parser_theta_verify.add_argument(
        "-m", "--max", type=int, help="largest exponent K to check", dest="max_exponent"
    )
    parser_theta_reduce = add_leaf(
        theta_subparsers, "reduce", "normal form of Θ(p,q)", "theta", "reduce", run_command, common
    )
    parser_theta_reduce.add_argument("-p", type=int, help="Wilson exponent", dest="p")
    parser_theta_reduce.add_argument("-q", type=int, help="chord exponent", dest="q")

    # parser for "morse"
    parser_morse = subparsers.add_parser("morse", help="closed-orbit series of fiberwise Morse data")
    morse_subparsers = parser_morse.add_subparsers(title="MORSE MODULE COMMANDS")
    for name, help in (
        ("zeta", "generating series of closed AL-paths"),
        ("alexander", "Alexander polynomial of the monodromy"),
        ("check-denominator", "denominators against (1-t)^2 Δ(t)"),
    ):
        leaf = add_leaf(morse_subparsers, name, help, "morse", name, run_command, common)
        leaf.add_argument("-i", "--input", help="Morse data JSON", dest="input")
        leaf.add_argument("-n", "--order", type=int, help="cross-check order N", dest="order")

    # parser for "surgery"
    parser_surgery = subparsers.add_parser("surgery", help="Z_n of surgery presentations")
    surgery_subparsers = parser_surgery.add_subparsers(title="SURGERY MODULE COMMANDS")
    parser_surgery_z = add_leaf(
        surgery_subparsers, "z", "Z_n of psi_n(Γ)", "surgery", "z", run_command, common
    )
    parser_surgery_z.add_argument("-i", "--input", help="diagram JSON", dest="input")
    parser_surgery_z.add_argument("-n", "--n", type=int, choices=(1, 2), help="degree n", dest="n")
    add_leaf(
        surgery_subparsers, "whitehead", "Z_1 of the Whitehead double", "surgery", "whitehead", run_command, common
    )

    # parser for "scheme"
    parser_scheme = subparsers.add_parser("scheme", help="forest-scheme identities")
    scheme_subparsers = parser_scheme.add_subparsers(title="SCHEME MODULE COMMANDS")
    parser_scheme_check = add_leaf(
        scheme_subparsers, "check", "telescoping and splitting identities", "scheme", "check", run_command, common
    )
    parser_scheme_check.add_argument("--max-k", type=int, help="largest scheme size (<= 6)", dest="max_k")

    # parser for "diagram"
    parser_diagram = subparsers.add_parser("diagram", help="single diagrams and enumeration")
    diagram_subparsers = parser_diagram.add_subparsers(title="DIAGRAM MODULE COMMANDS")
    parser_diagram_canon = add_leaf(
        diagram_subparsers, "canonicalize", "canonical form and id", "diagram", "canonicalize", run_command, common
    )
    parser_diagram_canon.add_argument("-i", "--input", help="diagram JSON", dest="input")
    parser_diagram_enum = add_leaf(
        diagram_subparsers, "enumerate", "isomorphism classes on a window", "diagram", "enumerate", run_command, common
    )
    add_window_args(parser_diagram_enum)
    parser_diagram_enum.add_argument(
        "--chord-only", action="store_true", help="only chord diagrams", dest="chord_only"
    )

    # parser for "golden"
    parser_golden = add_leaf(subparsers, "golden", "rerun the golden suite", "golden", None, golden, common)
    parser_golden.add_argument("-s", "--suite", help="suite directory of yaml manifests", dest="suite")
    parser_golden.add_argument(
        "-r", "--regenerate", action="store_true", help="rewrite the expected files", dest="regenerate"
    )

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    log_handling.setup_logging(getattr(args, "verbosity", 2))

    if "func" not in args:
        parser.print_help()
        return EXIT_PASS

    try:
        report = args.func(args)
    except KnotforgeError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR

    print_report(report, getattr(args, "fmt", None) or utils.read_defaults().get("format", "text"))
    return EXIT_PASS if report.passed else EXIT_CHECKS_FAILED


if __name__ == "__main__":

    # Run the main function
    sys.exit(main())
