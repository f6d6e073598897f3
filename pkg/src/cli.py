"""
Command line interface

    hp enumerate --chain PHPPHP --closed
    hp family S 2
    hp survey 11 --workers 4 --checkpoint n11.ckpt
    hp verify sk
    hp render --chain PHPPHP --closed --folding EESWWN --format ascii

Surveys and verification suites count foldings related by a chain symmetry
as one class (survey --isometry-only turns that off); enumerate does so
only with --quotient-automorphisms.

Results go to stdout, progress and logs to stderr. Exit codes:
0 success, 1 failed verification claim, 2 invalid input, 3 resource
limit, 4 corrupt checkpoint.
"""
import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from tqdm import tqdm

from .config import Settings, get_settings
from .core import (
    Chain,
    FoldingLike,
    InvalidChainError,
    InvalidFoldingError,
    Topology,
    as_folding,
    bond_graph_shape,
    contacts,
    embed,
    missing_bonds,
    parse_chain,
)
from .families import (
    FamilyParameterError,
    gen_F,
    gen_PHP,
    gen_S,
    gen_Z,
    standard_Z_embedding,
)
from .render import render
from .schemas import (
    ErrorResponse,
    FamilyResponse,
    FoldingReportResponse,
    SearchResultModel,
    SpectrumResponse,
    SurveyRecordModel,
    VerifyReportModel,
)
from .search import (
    SearchLimitError,
    SearchOptions,
    degeneracy_spectrum,
    enumerate_optimal,
    naive_oracle,
    stability_gap,
)
from .survey import CheckpointError, sweep
from .verify import SUITES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CLAIM = 1
EXIT_INVALID_INPUT = 2
EXIT_RESOURCE_LIMIT = 3
EXIT_CORRUPT_CHECKPOINT = 4

FAMILIES = ('S', 'F', 'Z', 'Zstd', 'PHP')
FORMATS = ('json', 'text', 'ascii', 'svg', 'csv')
COMMAND_FORMATS = {
    'enumerate': ('json', 'text'),
    'family': ('json', 'text'),
    'survey': ('json', 'text', 'csv'),
    'verify': ('json', 'text'),
    'render': ('ascii', 'text', 'svg', 'json'),
}


@dataclass
class CliConfig:
    """Parsed command line, independent of argparse"""
    subcommand: str
    chain: Optional[str] = None
    topology: Topology = Topology.OPEN
    format: Optional[str] = None
    store_limit: Optional[int] = None
    workers: Optional[int] = None
    checkpoint: Optional[str] = None
    quotient_automorphisms: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'CliConfig':
        return cls(
            subcommand=args.command,
            chain=getattr(args, 'chain', None),
            topology=Topology.CLOSED if getattr(args, 'closed', False) else Topology.OPEN,
            format=args.format,
            store_limit=args.store_limit,
            workers=args.workers,
            checkpoint=args.checkpoint,
            quotient_automorphisms=args.quotient_automorphisms,
        )

    def output_format(self, default: str) -> str:
        return self.format or default

    def check_format(self) -> None:
        """
        Raises:
            ValueError: If the subcommand has no output in the requested format
        """
        allowed = COMMAND_FORMATS[self.subcommand]
        if self.format is not None and self.format not in allowed:
            raise ValueError(
                f"{self.subcommand} does not support --format {self.format}; choose from {', '.join(allowed)}"
            )


def _family_object(name: str, k: int, topology: Topology):
    """(chain, folding) for a family name; one of the two is None"""
    if name == 'S':
        return gen_S(k), None
    if name == 'F':
        return gen_S(k), gen_F(k)
    if name == 'Z':
        return gen_Z(k), None
    if name == 'Zstd':
        return gen_Z(2 * k), standard_Z_embedding(k)
    if name == 'PHP':
        return gen_PHP(k, topology), None
    raise FamilyParameterError(f"Unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def _progress(total: int, unit: str):
    bar = tqdm(total=total, unit=unit, file=sys.stderr, disable=not sys.stderr.isatty())

    def callback(current: int, _total: int) -> None:
        bar.update(current - bar.n)

    return bar, callback


def cmd_enumerate(config: CliConfig, args: argparse.Namespace) -> int:
    chain = parse_chain(config.chain or '', config.topology)
    settings = get_settings()
    fmt = config.output_format('json')

    if args.spectrum:
        spectrum = degeneracy_spectrum(chain)
        doc = SpectrumResponse(
            chain=chain.to_dict(),
            spectrum=spectrum,
            stability_gap=stability_gap(chain),
        )
        if fmt == 'json':
            print(doc.model_dump_json(indent=2))
        else:
            for contacts, count in spectrum.items():
                print(f"{contacts}\t{count}")
        return EXIT_OK

    store_limit = config.store_limit if config.store_limit is not None else settings.store_limit
    if args.oracle:
        result = naive_oracle(chain, config.quotient_automorphisms, settings, store_limit)
    else:
        options = SearchOptions(
            store_limit=store_limit,
            parallel_split_depth=args.split_depth,
            quotient_chain_automorphisms=config.quotient_automorphisms,
            use_pruning=not args.no_pruning,
            workers=config.workers or settings.workers,
        )
        result = enumerate_optimal(chain, options)

    if fmt == 'json':
        print(SearchResultModel.model_validate(result.to_dict()).model_dump_json(indent=2))
    else:
        print(result.get_summary())
    return EXIT_OK


def cmd_family(config: CliConfig, args: argparse.Namespace) -> int:
    k = args.k if args.k is not None else args.k_positional
    if k is None:
        raise FamilyParameterError("A family parameter k is required")
    chain, folding = _family_object(args.name, k, config.topology)
    text = folding.steps if folding is not None else chain.labels
    fmt = config.output_format('text')
    if fmt == 'json':
        doc = FamilyResponse(
            family=args.name,
            k=k,
            text=text,
            chain=chain.to_dict(),
            folding=folding.to_dict() if folding is not None else None,
        )
        print(doc.model_dump_json(indent=2))
    else:
        print(text)
    return EXIT_OK


def cmd_survey(config: CliConfig, args: argparse.Namespace) -> int:
    settings = get_settings()
    if args.n >= settings.long_run_n and not args.long_run:
        raise SearchLimitError(
            f"n={args.n} is a long run (n >= {settings.long_run_n}); pass --long-run to start it"
        )
    fmt = config.output_format('json')
    detail_csv = args.csv
    if fmt == 'csv':
        if args.csv:
            raise ValueError("--format csv writes the detail rows to stdout; drop --csv or pick another format")
        detail_csv = sys.stdout
    bar, callback = _progress(2 ** args.n, 'chain')
    try:
        record = sweep(
            args.n,
            config.topology,
            workers=config.workers,
            checkpoint=config.checkpoint,
            block_size=args.block_size,
            detail_csv=detail_csv,
            quotient_chain_automorphisms=not args.isometry_only,
            block_limit=args.max_blocks,
            progress_callback=callback,
            settings=settings,
        )
    finally:
        bar.close()
    if fmt == 'json':
        print(SurveyRecordModel.model_validate(record.to_dict()).model_dump_json(indent=2))
    elif fmt == 'text':
        print(record.get_summary())
    return EXIT_OK


def cmd_verify(config: CliConfig, args: argparse.Namespace) -> int:
    kwargs = {}
    if args.suite == 'table1-small':
        kwargs['workers'] = config.workers
    report = run_suite(args.suite, **kwargs)
    if config.output_format('text') == 'json':
        print(VerifyReportModel.model_validate(report.to_dict()).model_dump_json(indent=2))
    else:
        print(report.get_summary())
    return EXIT_OK if report.passed else EXIT_FAILED_CLAIM


def _folding_report(chain: Chain, folding: FoldingLike) -> FoldingReportResponse:
    """Contacts, bond graph shape and missing bonds of one folded chain"""
    bonds = contacts(chain, folding)
    return FoldingReportResponse(
        chain=chain.to_dict(),
        folding=as_folding(folding).to_dict(),
        points=embed(chain, folding).to_dict()['points'],
        bonds=bonds.to_dict(),
        shape=bond_graph_shape(bonds).to_dict(),
        missing_bonds=missing_bonds(chain, folding).to_dict(),
    )


def cmd_render(config: CliConfig, args: argparse.Namespace) -> int:
    if args.family:
        if args.k is None:
            raise FamilyParameterError("--family needs --k")
        chain, folding = _family_object(args.family, args.k, config.topology)
        if folding is None:
            raise FamilyParameterError(f"Family {args.family!r} has no folding to draw; use F or Zstd")
    else:
        if not config.chain or args.folding is None:
            raise InvalidChainError("render needs --chain and --folding, or --family and --k")
        chain = parse_chain(config.chain, config.topology)
        folding = args.folding.strip().upper()

    fmt = config.output_format('ascii')
    if fmt == 'json':
        print(_folding_report(chain, folding).model_dump_json(indent=2))
        return EXIT_OK
    fmt = 'ascii' if fmt == 'text' else fmt
    drawing = render(chain, folding, fmt)
    if fmt == 'svg' and args.output:
        Path(args.output).write_text(drawing)
        logger.info("Wrote %s", args.output)
    else:
        sys.stdout.write(drawing if drawing.endswith('\n') else drawing + '\n')
    return EXIT_OK


COMMANDS = {
    'enumerate': cmd_enumerate,
    'family': cmd_family,
    'survey': cmd_survey,
    'verify': cmd_verify,
    'render': cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, help='Output format (default depends on the command)')
    common.add_argument('--workers', type=int, help='Worker count (default: HP_WORKERS)')
    common.add_argument('--checkpoint', type=str, help='Survey checkpoint file (resumed if present)')
    common.add_argument('--store-limit', type=int, help='Representatives to keep (default: HP_STORE_LIMIT)')
    common.add_argument('--quotient-automorphisms', action='store_true',
                        help='Also identify foldings related by chain symmetries')
    common.add_argument('--verbose', '-v', action='store_true', help='Log progress at INFO level')

    def topology_flags(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group()
        group.add_argument('--closed', action='store_true', help='Closed (cyclic) chain')
        group.add_argument('--open', action='store_true', help='Open chain (default)')

    parser = argparse.ArgumentParser(
        prog='hp',
        description='Exact optimal foldings of HP chains on the square lattice',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enumerate', parents=[common], help='Optimum and optimal folding classes of a chain')
    p.add_argument('--chain', required=True, help='H/P labels, e.g. PHPPHP')
    topology_flags(p)
    p.add_argument('--oracle', action='store_true', help='Use the unpruned reference enumeration')
    p.add_argument('--spectrum', action='store_true', help='Folding classes per contact count')
    p.add_argument('--split-depth', type=int, default=0, help='Prefix depth for parallel subtrees')
    p.add_argument('--no-pruning', action='store_true', help='Disable the contact bound')

    p = sub.add_parser('family', parents=[common], help='Generate a family chain or folding')
    p.add_argument('name', choices=FAMILIES)
    p.add_argument('k_positional', type=int, nargs='?', metavar='k')
    p.add_argument('--k', type=int)
    topology_flags(p)

    p = sub.add_parser('survey', parents=[common], help='Count uniquely folding chains of length n')
    p.add_argument('n', type=int)
    topology_flags(p)
    p.add_argument('--block-size', type=int, help='Chains per block (default: HP_BLOCK_SIZE)')
    p.add_argument('--csv', type=str, help='Per-chain detail CSV (n <= 14)')
    p.add_argument('--long-run', action='store_true', help='Allow n >= HP_LONG_RUN_N')
    p.add_argument('--max-blocks', type=int, help='Stop after this many blocks')
    p.add_argument('--isometry-only', action='store_true',
                   help='Count foldings related by a chain symmetry as separate classes')

    p = sub.add_parser('verify', parents=[common], help='Run a verification suite')
    p.add_argument('suite', choices=list(SUITES))

    p = sub.add_parser('render', parents=[common], help='Draw a folded chain')
    p.add_argument('--chain', help='H/P labels')
    p.add_argument('--folding', help='Direction string over E, N, W, S')
    p.add_argument('--family', choices=('F', 'Zstd'), help='Draw a family folding instead')
    p.add_argument('--k', type=int)
    p.add_argument('--output', '-o', type=str, help='SVG output file')
    topology_flags(p)

    return parser


def _configure_logging(verbose: bool, settings: Settings) -> None:
    level = logging.INFO if verbose else getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def _fail(error: Exception, code: int) -> int:
    doc = ErrorResponse(error=type(error).__name__, detail=str(error), exit_code=code)
    print(doc.model_dump_json(), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID_INPUT

    try:
        settings = get_settings()
        _configure_logging(args.verbose, settings)
        config = CliConfig.from_args(args)
        config.check_format()
        return COMMANDS[config.subcommand](config, args)
    except (InvalidChainError, InvalidFoldingError, FamilyParameterError) as e:
        return _fail(e, EXIT_INVALID_INPUT)
    except SearchLimitError as e:
        return _fail(e, EXIT_RESOURCE_LIMIT)
    except CheckpointError as e:
        return _fail(e, EXIT_CORRUPT_CHECKPOINT)
    except ValueError as e:
        return _fail(e, EXIT_INVALID_INPUT)


if __name__ == '__main__':
    sys.exit(main())
