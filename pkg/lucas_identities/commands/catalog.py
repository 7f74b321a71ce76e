"""catalog：列出或查看内置恒等式"""

from ..core.catalog import catalog, catalog_metadata, catalog_names
from ..core.dsl import render_lid, template_to_dict
from ..core.exceptions import ConfigurationError
from ..core.parameter import FieldSchema
from .base import Command, CommandResult, register_command


@register_command('catalog')
class CatalogCommand(Command):
    """catalog list | catalog show NAME"""

    HELP = "列出或查看内置恒等式"

    CONFIG_PARAMS = {
        "action": FieldSchema({"type": "string", "required": True, "choices": ["list", "show"]}),
        "target": FieldSchema({"type": "string", "description": "show 的恒等式名称"}),
    }

    TEXT_TEMPLATE = """\
{% if data.entries is defined %}
{% for e in data.entries %}
{{ "%-8s" | format(e.name) }} {{ e.description }}
{% endfor %}
{% else %}
{{ data.lid }}
{% if data.metadata.description %}
# {{ data.metadata.description }}
{% endif %}
{% if data.metadata.instance %}
# instance: {% for key, value in data.metadata.instance | dictsort %}{{ key }}={{ value }} {% endfor %}

{% endif %}
{% endif %}
"""

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument("action", choices=["list", "show"], help="list 或 show")
        parser.add_argument("target", nargs="?", help="show 的恒等式名称")

    async def run(self) -> CommandResult:
        if self.config["action"] == "list":
            entries = [{"name": name, "description": catalog_metadata(name)["description"]}
                       for name in catalog_names()]
            return CommandResult(0, {"entries": entries})

        name = self.config.get("target")
        if not name:
            raise ConfigurationError("catalog show 需要恒等式名称")
        template = catalog(name)
        data = {
            "metadata": catalog_metadata(name),
            "identity": template_to_dict(template),
            "lid": render_lid(template).rstrip("\n"),
        }
        return CommandResult(0, data)
