"""数值命令：eval（精确求值）与 bench（三种算法计时）"""

import math
import time
from fractions import Fraction

from ..core.algebra import format_rational
from ..core.exceptions import ConfigurationError, LucasIdentityError
from ..core.lucas import METHODS, SequenceParams, lucas_numeric, v_from_u
from ..core.parameter import FieldSchema
from .base import Command, CommandResult, parse_rational, register_command


def _digits(value) -> int:
    """十进制位数（不经过 str，避免大整数转换上限）"""
    n = abs(Fraction(value).numerator)
    if n == 0:
        return 1
    digits = int(math.log10(n)) + 1
    while 10 ** (digits - 1) > n:
        digits -= 1
    while 10 ** digits <= n:
        digits += 1
    return digits


def _params(config) -> SequenceParams:
    return SequenceParams(parse_rational(config["P"], "P"), parse_rational(config["Q"], "Q"))


@register_command('eval')
class EvalCommand(Command):
    """精确计算 U_k 或 V_k"""

    HELP = "精确计算 U_k(P,Q) 或 V_k(P,Q)"

    CONFIG_PARAMS = {
        "kind": FieldSchema({"type": "string", "default": "U", "choices": ["U", "V"]}),
        "k": FieldSchema({"type": "integer", "required": True, "description": "下标，可为负"}),
        "P": FieldSchema({"type": "string", "default": "1"}),
        "Q": FieldSchema({"type": "string", "default": "-1"}),
        "method": FieldSchema({"type": "string", "default": "doubling", "choices": list(METHODS)}),
    }

    TEXT_TEMPLATE = "{{ data.kind }}[{{ data.k }}] = {{ data.value }}\n"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("--kind", type=str.upper, help="U 或 V")
        parser.add_argument("--k", type=int, help="下标")
        parser.add_argument("--P", help="有理数 P，默认 1")
        parser.add_argument("--Q", help="有理数 Q，默认 -1")
        parser.add_argument("--method", help=" | ".join(METHODS))

    async def run(self) -> CommandResult:
        params = _params(self.config)
        k, kind = self.config["k"], self.config["kind"]
        pair = lucas_numeric(params, k, self.config["method"])
        value = pair.u_k if kind == "U" else v_from_u(pair, params)
        data = {
            "kind": kind,
            "k": k,
            "P": format_rational(params.P),
            "Q": format_rational(params.Q),
            "method": self.config["method"],
            "value": format_rational(Fraction(value)),
        }
        return CommandResult(0, data)


@register_command('bench')
class BenchCommand(Command):
    """
    对比 doubling / iterative / matrix 三种算法

    计时前先检查结果一致，不一致时按内部错误退出。
    """

    HELP = "比较 U_k 三种算法的耗时"

    CONFIG_PARAMS = {
        "k": FieldSchema({"type": "integer", "required": True, "min": 0}),
        "P": FieldSchema({"type": "string", "default": "1"}),
        "Q": FieldSchema({"type": "string", "default": "-1"}),
        "methods": FieldSchema({"type": "string", "default": ",".join(METHODS)}),
    }

    TEXT_TEMPLATE = """\
U[{{ data.k }}](P={{ data.P }}, Q={{ data.Q }}): {{ data.digits }} digits
{% for row in data.timings %}
{{ "%-10s" | format(row.method) }} {{ "%.6f" | format(row.seconds) }} s
{% endfor %}
"""

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("--k", type=int, help="下标 k >= 0")
        parser.add_argument("--P", help="有理数 P，默认 1")
        parser.add_argument("--Q", help="有理数 Q，默认 -1")
        parser.add_argument("--methods", help="逗号分隔，默认全部")

    async def run(self) -> CommandResult:
        params = _params(self.config)
        k = self.config["k"]
        methods = [m.strip() for m in self.config["methods"].split(",") if m.strip()]
        unknown = [m for m in methods if m not in METHODS]
        if unknown or not methods:
            raise ConfigurationError(f"未知的计算方法: {', '.join(unknown)}，可选: {', '.join(METHODS)}")

        results = {method: lucas_numeric(params, k, method).u_k for method in methods}
        if len(set(results.values())) > 1:
            raise LucasIdentityError(f"U[{k}] 的各算法结果不一致: {', '.join(results)}")

        timings = []
        for method in methods:
            started = time.perf_counter()
            lucas_numeric(params, k, method)
            timings.append({"method": method, "seconds": time.perf_counter() - started})
            self.context.log_debug(f"{method}: {timings[-1]['seconds']:.6f}s")

        value = next(iter(results.values()))
        data = {
            "k": k,
            "P": format_rational(params.P),
            "Q": format_rational(params.Q),
            "digits": _digits(value),
            "timings": timings,
        }
        return CommandResult(0, data)
