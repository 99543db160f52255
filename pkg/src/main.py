import logging
import sys
from typing import Iterable, List, Optional

from src.analysis_manager import AnalysisManager
from src.cli_parser import create_parser
from src.config import load_settings
from src.exceptions import (ConfigError, InconsistencyError, NotSmoothError,
                            StorageError, TableLookupError, UnsupportedError,
                            ValidationError)
from src.report_handler import ReportEnvelope, ReportHandler

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2


def run_command(manager: AnalysisManager, args) -> Iterable[ReportEnvelope]:
    if args.command == 'analyze':
        return [manager.analyze(args.a2, args.a1, args.a0, args.n)]
    if args.command == 'exceptional':
        return [manager.exceptional(args.a, args.b)]
    if args.command == 'local':
        return [manager.local(args.a2, args.a1, args.a0, args.n, args.prime)]
    if args.command == 'bundle':
        return [manager.bundle(args.a, args.b, args.n, args.axis)]
    if args.command == 'tetra':
        n_range = tuple(args.n_range) if args.n_range else None
        return manager.tetra(args.n, n_range)
    if args.command == 'u50':
        return [manager.u50()]
    if args.command == 'search':
        return [manager.search(args.a2, args.a1, args.a0, args.n, args.box)]
    raise ValidationError(f"Unknown command: {args.command}")


def main(argv: Optional[List[str]] = None):
    parser = create_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_INPUT)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)

    try:
        settings = load_settings(args.config).with_overrides(
            depth=args.depth, bound=args.bound, workers=args.workers)
        manager = AnalysisManager(settings)
        handler = ReportHandler(args.output)

        batch = args.command == 'tetra' and args.n_range is not None
        with handler.output() as append:
            for index, envelope in enumerate(run_command(manager, args)):
                text = handler.render(envelope, args.json, batch)
                if index and not (args.json and batch):
                    text = "\n" + text
                print(text, flush=True)
                append(text)

    except ValidationError as e:
        print(f"Validation Error: {str(e)}")
        sys.exit(EXIT_INPUT)
    except ConfigError as e:
        print(f"Config Error: {str(e)}")
        sys.exit(EXIT_INPUT)
    except NotSmoothError as e:
        print(f"Smoothness Error: {str(e)}")
        sys.exit(EXIT_INPUT)
    except UnsupportedError as e:
        print(f"Unsupported: {str(e)}")
        sys.exit(EXIT_INPUT)
    except TableLookupError as e:
        print(f"Table Error: {str(e)}")
        sys.exit(EXIT_INPUT)
    except StorageError as e:
        print(f"Storage Error: {str(e)}")
        sys.exit(EXIT_INPUT)
    except InconsistencyError as e:
        print(f"Internal Error: {str(e)}")
        sys.exit(EXIT_INTERNAL)
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        print(f"Unexpected error: {str(e)}")
        sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    main()
