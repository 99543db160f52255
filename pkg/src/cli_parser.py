import argparse


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true',
                        help='Emit JSON instead of text')
    common.add_argument('--verbose', action='store_true',
                        help='Log debug detail to stderr')
    common.add_argument('--config', help='Settings file (JSON)')
    common.add_argument('--output', help='Also write the report to this file')
    common.add_argument('--depth', type=int,
                        help='Residue layers p, p^2, ... searched for local points')
    common.add_argument('--bound', type=int, help='Search bound |n| <= M')
    common.add_argument('--workers', type=int,
                        help='Worker processes for range runs')
    return common


def _add_cubic(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('a2', type=int, help='Coefficient of u^2')
    parser.add_argument('a1', type=int, help='Coefficient of u')
    parser.add_argument('a0', type=int, help='Constant coefficient')
    parser.add_argument('n', type=int, help='Target value')


def create_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        description='Integral points and Brauer-Manin analysis of '
                    'f(u1) + f(u2) + f(u3) = n')
    subparsers = parser.add_subparsers(dest='command',
                                       help='Available commands')

    # Full pipeline
    analyze_parser = subparsers.add_parser(
        'analyze', parents=[common],
        help='Classify, decide the Brauer group and certify local solubility')
    _add_cubic(analyze_parser)

    # Exceptional set
    exceptional_parser = subparsers.add_parser(
        'exceptional', parents=[common],
        help='List the n where the classification is silent')
    exceptional_parser.add_argument('a', type=int, help='Depressed coefficient a')
    exceptional_parser.add_argument('b', type=int, help='Depressed coefficient b')

    # Local certificates
    local_parser = subparsers.add_parser('local', parents=[common],
                                         help='Local solubility certificates')
    _add_cubic(local_parser)
    local_parser.add_argument('--prime', type=int,
                              help='Certify a single prime only')

    # Conic bundle
    bundle_parser = subparsers.add_parser(
        'bundle', parents=[common],
        help='Conic bundle, singular fibres and Brauer classes')
    bundle_parser.add_argument('a', type=int, help='Depressed coefficient a')
    bundle_parser.add_argument('b', type=int, help='Depressed coefficient b')
    bundle_parser.add_argument('n', type=int, help='Target value')
    bundle_parser.add_argument('--axis', type=int, default=1, choices=(1, 2, 3),
                               help='Coordinate equal to r*x0 on the line')

    # Tetrahedral numbers
    tetra_parser = subparsers.add_parser(
        'tetra', parents=[common],
        help='Sums of three tetrahedral numbers equal to n')
    tetra_parser.add_argument('n', type=int, nargs='?', help='Target value')
    tetra_parser.add_argument('--n-range', type=int, nargs=2,
                              metavar=('LO', 'HI'), help='Run every n in [LO, HI]')

    subparsers.add_parser('u50', parents=[common],
                          help='Weak approximation on the surface with a=21, n=50')

    # Box search
    search_parser = subparsers.add_parser('search', parents=[common],
                                          help='Integer solutions in a box')
    _add_cubic(search_parser)
    search_parser.add_argument('--box', required=True, type=int,
                               help='Search |u_i| <= B')

    return parser
