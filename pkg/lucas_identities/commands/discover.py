"""discover：待定系数法发现恒等式"""

from typing import Dict, List

from ..core.discover import discover, report_to_dict, system_to_dict, vector_to_dict
from ..core.dsl import parse_coefficient, render_text
from ..core.exceptions import ConfigurationError
from ..core.identity import IdentityTemplate
from ..core.parameter import FieldSchema
from ..core.schemas import DISCOVER_OUTPUT_SCHEMA
from ..core.verifier import verdict_to_dict
from .base import Command, CommandResult, parse_assignments, parse_int_list, register_command, resolve_template


@register_command('discover')
class DiscoverCommand(Command):
    """
    建立并求解未知系数的线性方程组，逐个验证候选恒等式

    退出码：至少一个候选 Verified 为 0，否则为 1（无解或全部被否定）。
    """

    HELP = "从含未知系数的模板发现恒等式"

    CONFIG_PARAMS = {
        "expr": FieldSchema({"type": "string", "description": "含未知系数的 DSL 文本"}),
        "file": FieldSchema({"type": "string", "description": ".lid 文件路径"}),
        "samples": FieldSchema({"type": "string", "description": "主下标取值，如 -1,0,1 或 k=-1;k=0;k=1"}),
        "normalize": FieldSchema({"type": "string", "description": "归一化，如 c3=-1"}),
        "extra_rows": FieldSchema({"type": "integer", "default": 0, "min": 0, "description": "额外的采样行数"}),
    }

    OUTPUT_SCHEMA = DISCOVER_OUTPUT_SCHEMA

    TEXT_TEMPLATE = """\
ansatz: {{ data.text }}
unknowns: {{ data.system.unknowns | join(", ") }}
rank: {{ data.report.rank }}  nullity: {{ data.report.nullity }}
{% if data.report.determinant is defined %}
determinant: {{ data.report.determinant_factored }}
{% endif %}
{% if data.report.parameter_conditions %}
conditions: {% for c in data.report.parameter_conditions %}{{ c }} != 0{% if not loop.last %}, {% endif %}{% endfor %}

{% endif %}
{% if not data.report.consistent %}
system is inconsistent
{% endif %}
{% for c in data.candidates %}
[{{ loop.index }}] {{ c.text }}
    {% for name, value in c.solution | dictsort %}{{ name }} = {{ value }}{% if not loop.last %}, {% endif %}{% endfor %}

    {{ c.verdict.status }}{% if c.verdict.counterexample is defined %} (counterexample at {{ c.verdict.counterexample.indices }}){% endif %}

{% else %}
no solution
{% endfor %}
"""

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("--expr", help="含未知系数的 DSL 文本")
        parser.add_argument("--file", help=".lid 文件")
        parser.add_argument("--samples", help="主下标取值，如 -1,0,1")
        parser.add_argument("--normalize", help="归一化 NAME=VAL，如 c3=-1")
        parser.add_argument("--extra-rows", dest="extra_rows", type=int, help="在默认样本外追加的行数")

    async def run(self) -> CommandResult:
        template = resolve_template(self.config, self.NAME, ["expr", "file"])
        samples = self._samples(template)
        normalize = {name: parse_coefficient(value)
                     for name, value in parse_assignments(self.config.get("normalize"), "--normalize").items()}
        result = discover(template, samples=samples, normalize=normalize, extra_rows=self.get_config("extra_rows"),
                          trials=self.setting("trials"), seed=self.setting("seed"))
        unknowns = result.system.unknowns
        candidates = []
        for solution, vector, verdict in zip(result.solutions, result.vectors, result.verdicts):
            candidates.append({
                "text": render_text(solution),
                "solution": vector_to_dict(vector, unknowns),
                "verdict": verdict_to_dict(verdict),
            })
        data = {
            "text": render_text(template),
            "system": system_to_dict(result.system),
            "report": report_to_dict(result.report, unknowns),
            "candidates": candidates,
        }
        return CommandResult(0 if result.verified else 1, data)

    def _samples(self, template: IdentityTemplate):
        text = self.config.get("samples")
        if not text:
            return None
        primary = template.primary_index()
        if "=" not in text:
            if primary is None:
                raise ConfigurationError("模板没有下标变量，无法使用 --samples")
            return [{primary: d} for d in parse_int_list(text, "--samples")]
        samples: List[Dict[str, int]] = []
        for group in text.split(";"):
            values = parse_assignments(group, "--samples")
            samples.append({k: parse_int_list(v, "--samples")[0] for k, v in values.items()})
        return samples

