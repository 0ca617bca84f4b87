"""
periodlab command line

    periodlab report --g "x + x^3" [--f "0"] [--cmax C] [--samples N] [--tol TOL] [--format json|text]
    periodlab curve --g "sin(x)" [--f "0"] --clo 0.1 --chi 1.0 [--n 8] [--out curve.csv]
    periodlab builtin [key]

Exit codes: 0 success, 2 not a center, 1 invalid input or numerical failure, 64 usage error.
"""
import argparse
import logging
import sys
import time
import warnings

from .config import CurveConfig, IntegratorSettings, QuadratureSettings
from .conservative import period_curve_conservative
from .criteria import NOT_A_CENTER, classify
from .errors import NotACenter, PeriodLabError
from .lienard import period_curve_lienard
from .registry import BUILTINS, get_builtin
from .report import build_report, curve_csv, render_text, write_json
from .system import validate_system

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_A_CENTER = 2
EXIT_USAGE = 64


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got %s" % text)
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("expected a positive number, got %s" % text)
    return value


def _system_flags(parser):
    parser.add_argument('--g', required=True, help="restoring force g(x), e.g. 'x + x^3'")
    parser.add_argument('--f', default='0', help="damping f(x) of the Lienard equation (default 0)")
    parser.add_argument('--tol', type=_positive_float, default=None,
                        help="integrator and quadrature tolerance (default: PERIODLAB_TOL or 1e-10)")


def _report_flags(parser):
    parser.add_argument('--cmax', type=_positive_float, default=None,
                        help="top of the sampled curve (energy if f = 0, amplitude otherwise)")
    parser.add_argument('--samples', type=_positive_int, default=8, help="samples of the numeric period curve")
    parser.add_argument('--workers', type=_positive_int, default=1, help="threads sampling the curve")
    parser.add_argument('--format', choices=('json', 'text'), default='json')


def build_parser():
    parser = _ArgumentParser(prog='periodlab', description="period function analysis of planar centers")
    parser.add_argument('--verbose', '-v', action='store_true', help="debug logging on standard error")
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    report = commands.add_parser('report', help="classify the period function of a system")
    _system_flags(report)
    _report_flags(report)

    curve = commands.add_parser('curve', help="sample the period function as CSV")
    _system_flags(curve)
    curve.add_argument('--clo', type=_positive_float, required=True,
                       help="lowest energy (f = 0) or amplitude")
    curve.add_argument('--chi', type=_positive_float, required=True,
                       help="highest energy (f = 0) or amplitude")
    curve.add_argument('--n', type=_positive_int, default=8, help="number of samples")
    curve.add_argument('--out', default=None, help="output path, standard output if omitted")

    builtin = commands.add_parser('builtin', help="list the builtin systems or report on one of them")
    builtin.add_argument('key', nargs='?', default=None)
    builtin.add_argument('--tol', type=_positive_float, default=None)
    _report_flags(builtin)
    return parser


def _settings(args):
    if args.tol is None:
        return IntegratorSettings.from_env(), QuadratureSettings()
    return IntegratorSettings(rtol=args.tol), QuadratureSettings(tol=args.tol)


def _emit_report(sys_spec, args):
    settings, quadrature = _settings(args)
    curve_config = CurveConfig(n=args.samples, cmax=args.cmax, workers=args.workers)
    start = time.perf_counter()
    report = classify(sys_spec, curve_config=curve_config, settings=settings, quadrature=quadrature)
    logger.info("classification took %.3f s", time.perf_counter() - start)
    document = build_report(report).to_dict()
    if args.format == 'text':
        sys.stdout.write(render_text(document))
    else:
        write_json(document, sys.stdout)
    return EXIT_NOT_A_CENTER if report.final_conclusion == NOT_A_CENTER else EXIT_OK


def cmd_report(args):
    return _emit_report(validate_system(args.f, args.g), args)


def cmd_curve(args):
    settings, quadrature = _settings(args)
    sys_spec = validate_system(args.f, args.g)
    start = time.perf_counter()
    if sys_spec.is_conservative:
        curve = period_curve_conservative(sys_spec.g, args.clo, args.chi, args.n, quadrature)
    else:
        curve = period_curve_lienard(sys_spec, args.clo, args.chi, args.n, settings.rtol, settings)
    logger.info("%d samples took %.3f s", len(curve), time.perf_counter() - start)
    text = curve_csv(curve)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, 'w', encoding='utf-8', newline='') as stream:
            stream.write(text)
    return EXIT_OK


def cmd_builtin(args):
    if args.key is None:
        for entry in BUILTINS:
            sys.stdout.write(entry.describe() + '\n')
        return EXIT_OK
    entry = get_builtin(args.key)
    sys.stderr.write(entry.describe() + '\n')
    return _emit_report(entry.system(), args)


COMMANDS = {'report': cmd_report, 'curve': cmd_curve, 'builtin': cmd_builtin}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == 'curve' and not args.clo < args.chi:
        parser.error("empty range: --clo %g must be below --chi %g" % (args.clo, args.chi))
    if args.command == 'curve' and args.n < 2:
        parser.error("a period curve needs --n 2 or more, got %d" % args.n)
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('always', RuntimeWarning)
            return COMMANDS[args.command](args)
    except NotACenter as e:
        sys.stderr.write("periodlab: not a center: %s\n" % e)
        return EXIT_NOT_A_CENTER
    except PeriodLabError as e:
        sys.stderr.write("periodlab: %s: %s\n" % (type(e).__name__, e))
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
