"""内置子命令"""

from .base import Command, CommandResult, get_registered_commands, register_command
from .verify import VerifyCommand
from .discover import DiscoverCommand
from .generate import InterpCommand, PowrepCommand
from .numeric import BenchCommand, EvalCommand
from .catalog import CatalogCommand


# 内置命令字典（按命令行中的顺序）
BUILTIN_COMMANDS = {
    'verify': VerifyCommand,
    'discover': DiscoverCommand,
    'powrep': PowrepCommand,
    'interp': InterpCommand,
    'eval': EvalCommand,
    'catalog': CatalogCommand,
    'bench': BenchCommand,
}


__all__ = [
    'Command',
    'CommandResult',
    'register_command',
    'get_registered_commands',
    'VerifyCommand',
    'DiscoverCommand',
    'PowrepCommand',
    'InterpCommand',
    'EvalCommand',
    'CatalogCommand',
    'BenchCommand',
    'BUILTIN_COMMANDS',
]
