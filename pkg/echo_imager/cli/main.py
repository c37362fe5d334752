"""
Command-line entry point: ``echo-imager <command> [options]``.
"""
import argparse
import json
import logging
import sys

import numpy as np

import echo_imager
from echo_imager import settings
from echo_imager.base.exceptions import EchoImagerError, NumericalError
from echo_imager.cli.handlers import (
    EchoVerifyHandler, FisherHandler, NoiseMatrixHandler, RunHandler, SweepHandler, Table1Handler,
)


logger = logging.getLogger(__name__)

COMMANDS = {
    'table1': (Table1Handler, 'perturbative Fisher information bounds next to the protocols that reach them'),
    'echo-verify': (EchoVerifyHandler, 'randomised checks of the squeezing echo'),
    'run': (RunHandler, 'run the experiment a scenario file describes'),
    'sweep': (SweepHandler, 'Fisher information and estimator variance against the separation'),
    'fisher': (FisherHandler, 'Fisher information of one configured read-out'),
    'noise-matrix': (NoiseMatrixHandler, 'first-order noise sensitivity of each probe'),
}


def seed_value(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError('seed must be an unsigned 64-bit integer')
    return value


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('must be at least 1')
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog='echo-imager', description='Echo-imaging quantum metrology simulator.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {echo_imager.__version__}')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', help='JSON scenario file')
    common.add_argument('--seed', type=seed_value, help='master seed (overrides run.seed)')
    common.add_argument('--out', metavar='DIR', help='output directory (overrides run.output)')
    common.add_argument('--format', choices=('csv', 'json'), default='csv', help='table format')
    common.add_argument('--threads', type=positive_int,
                        help=f'worker threads (default: ECHO_IMAGER_THREADS={settings.THREADS})')
    common.add_argument('--log-level', default=settings.LOG_LEVEL,
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'), type=str.upper)

    commands = parser.add_subparsers(dest='command', required=True)
    for name, (handler_class, help_text) in COMMANDS.items():
        commands.add_parser(name, parents=[common], help=help_text).set_defaults(handler_class=handler_class)
    return parser


def error_record(error):
    return json.dumps({'category': error.category, 'message': str(error)}, sort_keys=True)


def main(argv=None):
    options = build_parser().parse_args(argv)
    logging.basicConfig(level=options.log_level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        summary = options.handler_class(options).run()
    except (np.linalg.LinAlgError, FloatingPointError) as e:
        logger.debug('%s failed', options.command, exc_info=True)
        error = NumericalError(f'{type(e).__name__}: {e}')
        print(error_record(error), file=sys.stderr)
        return error.exit_code
    except EchoImagerError as e:
        logger.debug('%s failed', options.command, exc_info=True)
        print(error_record(e), file=sys.stderr)
        return e.exit_code
    print(json.dumps({'command': options.command, 'outputs': summary['outputs']}, sort_keys=True))
    return 0


if __name__ == '__main__':
    sys.exit(main())
