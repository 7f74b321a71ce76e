"""verify：符号验证恒等式"""

from ..core.catalog import catalog_instance, catalog_names
from ..core.dsl import render_text, template_to_dict
from ..core.exceptions import PreconditionError
from ..core.parameter import FieldSchema
from ..core.schemas import CATALOG_VERDICTS_SCHEMA, IDENTITY_OUTPUT_SCHEMA
from ..core.verifier import verdict_to_dict, verify, verify_all_async
from .base import Command, CommandResult, exactly_one, register_command, resolve_template


@register_command('verify')
class VerifyCommand(Command):
    """
    验证一个恒等式（--name / --expr / --file）或整个目录（--all）

    退出码：全部 Verified 为 0，否则为 1。
    """

    HELP = "符号验证恒等式"

    CONFIG_PARAMS = {
        "name": FieldSchema({"type": "string", "description": "目录中的名称，如 GF.8"}),
        "expr": FieldSchema({"type": "string", "description": "DSL 文本"}),
        "file": FieldSchema({"type": "string", "description": ".lid 文件路径"}),
        "params": FieldSchema({"type": "string", "description": "P,Q 特化，如 1,-1"}),
        "bind": FieldSchema({"type": "string", "description": "下标绑定，如 n=3,m=1"}),
        "all": FieldSchema({"type": "boolean", "default": False, "description": "验证整个目录"}),
    }

    OUTPUT_SCHEMA = {"anyOf": [IDENTITY_OUTPUT_SCHEMA, CATALOG_VERDICTS_SCHEMA]}

    TEXT_TEMPLATE = """\
{% if data.verdicts is defined %}
{% for v in data.verdicts %}
{{ "%-8s" | format(v.name) }} {{ v.status }}{% if v.guards %}  [{{ v.guards | join(", ") }}]{% endif %}

{% endfor %}
{{ data.verified }}/{{ data.total }} Verified
{% else %}
{{ data.text }}
{{ data.verdict.status }}
{% if data.verdict.guards %}
guards: {{ data.verdict.guards | join(", ") }}
{% endif %}
{% if data.verdict.witness is defined %}
witness: {{ data.verdict.witness.monomial }} coefficient {{ data.verdict.witness.coefficient }}
{% endif %}
{% if data.verdict.counterexample is defined %}
counterexample: {% for key, value in data.verdict.counterexample | dictsort %}{{ key }}={{ value }} {% endfor %}

{% endif %}
{% endif %}
"""

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("--name", help="目录中的恒等式名称")
        parser.add_argument("--expr", help="DSL 文本，如 \"U[2k] = U[k]*V[k]\"")
        parser.add_argument("--file", help=".lid 文件")
        parser.add_argument("--params", help="P,Q 特化，如 1,-1 或 P=1,Q=-1")
        parser.add_argument("--bind", help="下标绑定，如 n=3,m=1")
        parser.add_argument("--all", action="store_true", default=None, help="验证整个目录")

    async def run(self) -> CommandResult:
        trials, seed = self.setting("trials"), self.setting("seed")
        if exactly_one(self.config, ["name", "expr", "file", "all"], self.NAME) == "all":
            return await self._verify_catalog(trials, seed)

        template = resolve_template(self.config, self.NAME)
        if not template.is_fully_known():
            raise PreconditionError(f"verify 不接受未知系数: {', '.join(template.unknowns())}")
        verdict = verify(template, trials=trials, seed=seed, sample_range=self.setting("sample_range"),
                         index_range=self.setting("index_range"))
        data = {
            "identity": template_to_dict(template),
            "text": render_text(template),
            "verdict": verdict_to_dict(verdict),
        }
        return CommandResult(0 if verdict.verified else 1, data)

    async def _verify_catalog(self, trials: int, seed: int) -> CommandResult:
        names = catalog_names()
        templates = [catalog_instance(name) for name in names]
        self.context.start_timer("verify-all")
        verdicts = await verify_all_async(templates, workers=self.setting("workers"), trials=trials, seed=seed)
        elapsed = self.context.stop_timer("verify-all")
        self.context.log_info(f"目录验证完成: {len(verdicts)} 个恒等式，用时 {elapsed:.2f}s")
        verified = sum(1 for v in verdicts if v.verified)
        data = {
            "verdicts": [verdict_to_dict(v) for v in verdicts],
            "verified": verified,
            "total": len(verdicts),
        }
        return CommandResult(0 if verified == len(verdicts) else 1, data)
