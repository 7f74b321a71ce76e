"""
命令行入口

    lucas-identities [--json] [--config settings.yaml] [--seed N] <command> [options]

退出码：0 验证通过/求解并验证；1 不成立或无解；2 用法错误；3 内部错误。
"""

import argparse
import asyncio
import logging
import os
import sys
from typing import List, Optional, TextIO

from .commands import BUILTIN_COMMANDS
from .core.context import EngineContext
from .core.exceptions import (
    CommandExecutionError, ConfigurationError, IdentitySyntaxError, PreconditionError, SingularParameterError,
    UnknownIdentityError,
)
from .core.parameter import load_settings

logger = logging.getLogger(__name__)

LOG_ENV = "LUCAS_IDENTITIES_LOG"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

USAGE_ERRORS = (ConfigurationError, IdentitySyntaxError, UnknownIdentityError, PreconditionError,
                SingularParameterError)

# 全局选项，不传给命令
_GLOBAL_KEYS = ("command", "json", "config", "seed", "trials", "workers")


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """用法错误抛异常而不是直接退出，由 run 统一处理"""

    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lucas-identities", description="Lucas 序列恒等式的验证与发现")
    parser.add_argument("--json", action="store_true", help="以 JSON 输出")
    parser.add_argument("--config", help="设置文件（YAML 或 JSON）")
    parser.add_argument("--seed", type=int, help="随机数种子，默认 0")
    parser.add_argument("--trials", type=int, help="数值检验次数")
    parser.add_argument("--workers", type=int, help="verify --all 的并发数")
    subparsers = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    for name, command_class in BUILTIN_COMMANDS.items():
        sub = subparsers.add_parser(name, help=command_class.HELP, description=command_class.__doc__)
        command_class.add_arguments(sub)
    return parser


def configure_logging():
    """日志级别取自环境变量 LUCAS_IDENTITIES_LOG，输出到 stderr"""
    level_name = os.environ.get(LOG_ENV, "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _exit_code_for(error: BaseException) -> int:
    if isinstance(error, CommandExecutionError) and error.original_error is not None:
        error = error.original_error
    return EXIT_USAGE if isinstance(error, USAGE_ERRORS) else EXIT_INTERNAL


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    解析参数并执行一个子命令

    Args:
        argv: 命令行参数（不含程序名），默认取 sys.argv[1:]
        stdout: 结果输出流
        stderr: 诊断输出流

    Returns:
        退出码
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise _UsageError("需要指定子命令")
    except _UsageError as e:
        print(f"用法错误: {e}", file=stderr)
        print(parser.format_usage(), file=stderr, end="")
        return EXIT_USAGE

    options = vars(args)
    try:
        settings = load_settings(args.config, {"seed": args.seed, "trials": args.trials, "workers": args.workers})
        context = EngineContext(settings)
        config = {k: v for k, v in options.items() if k not in _GLOBAL_KEYS}
        command = BUILTIN_COMMANDS[args.command](config, context)
        result = asyncio.run(command.execute())
        output = result.to_json() + "\n" if args.json else command.render_text(result)
    except Exception as e:  # noqa: BLE001
        code = _exit_code_for(e)
        if code == EXIT_INTERNAL:
            logger.exception("命令 %s 内部错误", args.command)
        print(f"错误: {e}", file=stderr)
        return code

    stdout.write(output)
    return result.exit_code


def main():
    configure_logging()
    # 大下标的 U_k 可能有数万位十进制数字
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    sys.exit(run())


if __name__ == "__main__":
    main()
