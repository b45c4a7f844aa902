#!/usr/bin/env python
"""
Exact arithmetic dynamics on the projective line over Q.

Usage:
    python arithdyn.py analyze "x^2"                    - Periodic points, bounds and checks
    python arithdyn.py bounds --d 2 --s 1               - Explicit bound table
    python arithdyn.py generate dfixed --d 3            - Expanded example-family polynomial
    python arithdyn.py verify @baron_cycle --lemma baron
    python arithdyn.py census "x^2" --p 7               - Cycle census mod a good prime
    python arithdyn.py list                             - Named example maps
    python arithdyn.py semigroup --gen "x^2" --gen "x^3"

Maps are written as "x^3-3*x^2+x+2", "F=X^2+Y^2; G=X*Y", "[X^2 : Y^2]" or @key.
Exit codes: 0 all PASS, 1 any FAIL, 2 usage or parse error, 3 resource budget.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from config.settings import (  # noqa: E402
    APP_NAME, DEFAULT_BOUND_FAMILY, DEFAULT_PERIOD_CAP, LOG_FORMAT, LOG_LEVEL, VERSION
)
from cli.commands import COMMANDS, FAMILIES, LEMMAS  # noqa: E402
from utils.errors import ArithDynError  # noqa: E402

BOUND_FAMILIES = ('evertse', 'bs-ess')


def _add_common(parser: argparse.ArgumentParser, with_map: bool = True) -> None:
    if with_map:
        parser.add_argument('map', help='map expression or @key')
    parser.add_argument('--period-cap', type=int, default=DEFAULT_PERIOD_CAP,
                        help=f'largest minimal period enumerated (default {DEFAULT_PERIOD_CAP})')
    parser.add_argument('--family', choices=BOUND_FAMILIES, default=DEFAULT_BOUND_FAMILY)
    parser.add_argument('--S', dest='S', default=None, help='comma-separated primes, e.g. 2,3')
    parser.add_argument('--cache-dir', default=None, help='SQLite cache for periodic-point enumerations')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME, description=__doc__.splitlines()[1])
    parser.add_argument('--version', action='version', version=f'{APP_NAME} {VERSION}')
    sub = parser.add_subparsers(dest='command', required=True)

    _add_common(sub.add_parser('analyze', help='full report for one map'))

    p = sub.add_parser('bounds', help='explicit bound table')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--s', type=int, required=True)
    p.add_argument('--family', choices=BOUND_FAMILIES, default=DEFAULT_BOUND_FAMILY)

    p = sub.add_parser('generate', help='example-family polynomial')
    p.add_argument('family', choices=FAMILIES)
    p.add_argument('--d', type=int, default=3, help='dfixed degree')
    p.add_argument('--ns', default=None, help='period2 values, e.g. 1,2,3')
    p.add_argument('--a', type=int, default=0, help='baron-cycle 2-cycle start')
    p.add_argument('--b', type=int, default=2, help='baron-cycle 2-cycle end')

    p = sub.add_parser('verify', help='run one executable check')
    _add_common(p)
    p.add_argument('--lemma', choices=LEMMAS, required=True)
    for name in ('P', 'Q', 'R'):
        p.add_argument(f'--{name}', dest=name, default=None)
    p.add_argument('--A', dest='A', default=None, help='condition set, e.g. 0,inf')
    p.add_argument('--points', default=None, help='four points for four-point membership')
    p.add_argument('--psi', default=None, help='second map for psi o phi')
    p.add_argument('--p', type=int, default=None, help='prime for injectivity')

    p = sub.add_parser('census', help='cycle census of the reduction mod p')
    _add_common(p)
    p.add_argument('--p', type=int, required=True)

    sub.add_parser('list', help='named example maps')

    p = sub.add_parser('semigroup', help='uniform bound over composed words')
    _add_common(p, with_map=False)
    p.add_argument('--gen', action='append', required=True, help='generator map (repeatable)')
    p.add_argument('--words', default=None, help="words like '0,1;1,0' (default: all up to --max-length)")
    p.add_argument('--max-length', type=int, default=2)

    for command_parser in sub.choices.values():
        command_parser.add_argument('--json', action='store_true', help='emit the JSON report')
        command_parser.add_argument('-v', '--verbose', action='count', default=0)
    return parser


def configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    configure_logging(args.verbose)

    try:
        result = COMMANDS[args.command](args)
    except ArithDynError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    if args.json:
        print(json.dumps(result.payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
