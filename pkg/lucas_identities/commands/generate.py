"""生成类命令：powrep（U_{mk}/V_{mk} 的幂表示）与 interp（插值恒等式）"""

from ..core.discover import power_representation
from ..core.dsl import render_text, template_to_dict
from ..core.interpolation import VARIANTS, interpolation_identity
from ..core.parameter import FieldSchema
from ..core.schemas import IDENTITY_OUTPUT_SCHEMA
from ..core.verifier import verdict_to_dict, verify
from .base import Command, CommandResult, parse_int_list, parse_params, register_command

_IDENTITY_TEXT = """\
{{ data.text }}
{% if data.verdict is defined %}
{{ data.verdict.status }}
{% endif %}
"""


@register_command('powrep')
class PowrepCommand(Command):
    """U_{mk} 或 V_{mk} 表示为 U_k、U_{k+1} 的 m 次齐次式"""

    HELP = "生成 U_{mk}/V_{mk} 的幂表示"

    CONFIG_PARAMS = {
        "m": FieldSchema({"type": "integer", "required": True, "min": 1, "description": "倍数 m"}),
        "kind": FieldSchema({"type": "string", "default": "U", "choices": ["U", "V"], "description": "序列类型"}),
        "cross_check": FieldSchema({"type": "boolean", "default": False,
                                    "description": "与待定系数法的唯一解比对"}),
    }

    TEXT_TEMPLATE = _IDENTITY_TEXT
    OUTPUT_SCHEMA = IDENTITY_OUTPUT_SCHEMA

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("--m", type=int, help="倍数 m >= 1")
        parser.add_argument("--kind", type=str.upper, help="U 或 V")
        parser.add_argument("--cross-check", dest="cross_check", action="store_true", default=None,
                            help="同时用待定系数法求解并比对")

    async def run(self) -> CommandResult:
        template = power_representation(self.config["m"], self.config["kind"],
                                        cross_check=self.config["cross_check"])
        data = {
            "identity": template_to_dict(template),
            "text": render_text(template),
            "verdict": {"name": template.name, "status": "Verified", "guards": template.guards()},
        }
        return CommandResult(0, data)


@register_command('interp')
class InterpCommand(Command):
    """
    U_{k+x}^n 用 n+1 个节点 U_{k+d_i}^n 表示

    生成后立即验证；x 可以是整数或下标变量名。
    """

    HELP = "生成插值恒等式"

    CONFIG_PARAMS = {
        "n": FieldSchema({"type": "integer", "required": True, "min": 1, "description": "幂次 n"}),
        "nodes": FieldSchema({"type": "string", "required": True, "description": "n+1 个不同的整数节点"}),
        "x": FieldSchema({"type": "string", "description": "整数或下标变量名，默认为符号 x"}),
        "variant": FieldSchema({"type": "string", "default": "U", "choices": list(VARIANTS),
                                "description": "U、Q（x = 0 的归一形式）或 W（Horadam）"}),
        "params": FieldSchema({"type": "string", "description": "P,Q 特化"}),
    }

    TEXT_TEMPLATE = _IDENTITY_TEXT
    OUTPUT_SCHEMA = IDENTITY_OUTPUT_SCHEMA

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("--n", type=int, help="幂次 n >= 1")
        parser.add_argument("--nodes", help="节点，如 -2,-1,0,1")
        parser.add_argument("--x", help="整数或下标变量名")
        parser.add_argument("--variant", type=str.upper, help="U | Q | W")
        parser.add_argument("--params", help="P,Q 特化，如 1,-1")

    async def run(self) -> CommandResult:
        nodes = parse_int_list(self.config["nodes"], "--nodes")
        template = interpolation_identity(self.config["n"], nodes, x=self._x(), variant=self.config["variant"],
                                          params=parse_params(self.config.get("params")))
        verdict = verify(template, trials=self.setting("trials"), seed=self.setting("seed"))
        data = {
            "identity": template_to_dict(template),
            "text": render_text(template),
            "verdict": verdict_to_dict(verdict),
        }
        return CommandResult(0 if verdict.verified else 1, data)

    def _x(self):
        x = self.config.get("x")
        if x is None:
            return None
        try:
            return int(x)
        except ValueError:
            return x
