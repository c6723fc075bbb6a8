"""
Command-line front door.

stdout carries only the report (deterministic JSON, or CSV for
`frontier --format csv` without --out); diagnostics go to stderr.
Exit codes: 0 success, 1 certificate or audit FAIL, 2 invalid input,
3 optimizer iteration cap reached on at least one λ.
"""
import argparse
import sys
from typing import List, Optional

import pydantic

from qhelper import __description__, __version__
from qhelper.commands import COMMANDS
from qhelper.commands.base_command import EXIT_INVALID_INPUT
from qhelper.core.errors import QHelperError
from qhelper.core.serialization import dumps_report
from qhelper.utils.atomic_io import write_text_atomic
from qhelper.utils.centralized_logging import get_logger, set_verbosity, setup_logging
from qhelper.utils.input_validation import InputValidator

logger = get_logger(__name__)

STATE_HELP = ("state: bell | isotropic:p (p*Phi + (1-p)*I/4, Phi the 2-qubit maximally "
              "entangled projector) | product:h1,h2 (diagonal qubits with binary entropies "
              "h1, h2) | random:dA,dB,seed | inline JSON | JSON file")
CHANNEL_HELP = ("helper channel: preset:identity | preset:discard | preset:depolarizing:p | "
                "preset:dephasing:p | preset:amplitude_damping:g | preset:replace:p0,p1,... | "
                "random:dC,dE | inline JSON | JSON file")


class _Parser(argparse.ArgumentParser):
    """argparse that logs usage errors to stderr and exits with code 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        logger.error(f"{self.prog}: {message}")
        raise SystemExit(EXIT_INVALID_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--tol", type=float, default=None, help="entropy tolerance (default from config)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="also write the report to this path")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    parser = _Parser(prog="qhelper", description=__description__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", parents=[common], help="entropies and mutual informations")
    p.add_argument("--state", required=True, help=STATE_HELP)
    p.add_argument("--map", default=None, help="label bindings LABEL=LABEL,...")
    p.add_argument("expressions", nargs="*", help='entropic expressions such as "H(A|B)" "I(A;B)"')

    p = sub.add_parser("rates", parents=[common], help="helper rate pair of one channel")
    p.add_argument("--state", required=True, help=STATE_HELP)
    p.add_argument("--channel", required=True, help=CHANNEL_HELP)

    p = sub.add_parser("frontier", parents=[common], help="trace the rate-region frontier")
    p.add_argument("--state", required=True, help=STATE_HELP)
    p.add_argument("--dim-c", type=int, default=2, dest="dim_c")
    p.add_argument("--dim-e", type=int, default=None, dest="dim_e", help="default dim_B*dim_C")
    p.add_argument("--lambdas", default=None, help="ascending comma-separated weights")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--hull-out", default=None, dest="hull_out",
                   help="two-column 'r2 r1' hull file (default <out stem>_hull.dat)")
    p.add_argument("--oracle", action="store_true", help="compare against the preset-channel sweep")

    p = sub.add_parser("audit", parents=[common], help="converse audit on n copies")
    p.add_argument("--state", required=True, help=STATE_HELP)
    p.add_argument("--channel", default=None, help=CHANNEL_HELP + " (default: seeded random isometry)")
    p.add_argument("--n", type=int, default=2, choices=(1, 2))
    p.add_argument("--dim-c", type=int, default=2, dest="dim_c")
    p.add_argument("--dim-e", type=int, default=None, dest="dim_e")

    p = sub.add_parser("ri", parents=[common], help="parse, evaluate and certify RIs")
    p.add_argument("file", nargs="?", default=None, help="RI file, one statement per line")
    p.add_argument("--certify", default=None, help="certificate JSON or builtin:NAME")
    p.add_argument("--bind", default=None, help="state to evaluate against (" + STATE_HELP + ")")
    p.add_argument("--map", default=None, help="label bindings LABEL=LABEL,...")
    p.add_argument("--count-classical", action="store_true", dest="count_classical",
                   help="include [c->c] in the certificate verdict")

    sub.add_parser("presets", parents=[common], help="list built-in presets")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    set_verbosity(args.verbose)

    command = COMMANDS[args.command]()
    try:
        args.seed = InputValidator.validate_seed(args.seed, "--seed")
        if args.tol is not None:
            args.tol = InputValidator.validate_tolerance(args.tol)
        result = command.run(args)
    except pydantic.ValidationError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID_INPUT
    except QHelperError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_INVALID_INPUT
    except OSError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_INVALID_INPUT

    if result.error_message:
        logger.warning(f"{args.command}: {result.error_message}")

    rendered = result.render()
    if rendered is None:
        rendered = dumps_report(result.data) + "\n"
        if args.out and args.format == "json":
            try:
                write_text_atomic(rendered, args.out)
            except (OSError, QHelperError) as e:
                logger.error(f"{args.command}: {e}")
                return EXIT_INVALID_INPUT
    sys.stdout.write(rendered)
    sys.stdout.flush()
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
