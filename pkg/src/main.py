import logging
import sys
import traceback
from typing import List, Optional

import orjson
from coze_coding_utils.log.write_log import request_context, setup_logging
from coze_coding_utils.runtime_ctx.context import new_context

from cli.commands import EXIT_ERROR, CommandResult, build_parser, run
from storage.report.report_store import dump_record, write_records
from utils.config.settings import WorkbenchSettings, get_settings, load_settings
from utils.error.errors import describe_error

logger = logging.getLogger(__name__)

# setup_logging 每个进程只调用一次
_logging_ready = False


def _configure(settings: WorkbenchSettings) -> None:
    global _logging_ready
    if _logging_ready:
        logging.getLogger().setLevel(settings.log.level)
        return
    log = settings.log
    setup_logging(
        log_file=log.file,
        max_bytes=log.max_bytes,
        backup_count=log.backup_count,
        log_level=log.level,
        use_json_format=log.json_format,
        console_output=log.console,
    )
    _logging_ready = True


def _emit(result: CommandResult, as_json: bool) -> None:
    if as_json:
        if result.payload is not None:
            sys.stdout.write(orjson.dumps(result.payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2).decode())
            sys.stdout.write("\n")
        else:
            for record in result.records:
                sys.stdout.write(dump_record(record).decode() + "\n")
    elif result.text:
        sys.stdout.write(result.text.rstrip("\n") + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 用 2 表示用法错误，这里统一为 3；--help 仍为 0
        return 0 if e.code in (0, None) else EXIT_ERROR

    ctx = new_context(method=args.command)
    request_context.set(ctx)
    try:
        settings = load_settings(args.config) if args.config else get_settings()
        _configure(settings)
        logger.debug(f"run {ctx.run_id}: {args}")
        result = run(args.command, args, settings)
        _emit(result, args.json)
        if args.report and result.records:
            path = write_records(args.report, result.records)
            logger.info(f"report written to {path}")
        return result.exit_code
    except Exception as e:
        err = describe_error(e, {"command": args.command, "run_id": ctx.run_id})
        logger.error(f"[{err.code}] {err.message}\nCategory: {err.category}")
        logger.debug(traceback.format_exc())
        sys.stderr.write(f"[{err.code}] {err.message}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
