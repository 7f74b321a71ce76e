"""子命令基类定义"""

import argparse
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Type

import jsonschema
from jinja2 import Environment, StrictUndefined, TemplateError

from ..core.algebra import as_rational
from ..core.catalog import catalog, catalog_instance
from ..core.context import EngineContext
from ..core.dsl import load_lid, parse_identity
from ..core.exceptions import CommandExecutionError, ConfigurationError, LucasIdentityError
from ..core.identity import IdentityTemplate, substitute
from ..core.parameter import FieldSchema, validate_config
from ..core.schemas import validate_document

logger = logging.getLogger(__name__)

# 全局命令注册表（用于装饰器注册）
_command_registry: Dict[str, Type["Command"]] = {}

# 文本输出模板环境
_jinja_env = Environment(trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True,
                         undefined=StrictUndefined)


def register_command(name: str):
    """
    命令注册装饰器

    Example:
        @register_command('verify')
        class VerifyCommand(Command):
            ...
    """
    def decorator(cls):
        cls.NAME = name
        _command_registry[name] = cls
        return cls
    return decorator


def get_registered_commands() -> Dict[str, Type["Command"]]:
    """命令名称到命令类的映射（按注册顺序）"""
    return _command_registry.copy()


@dataclass
class CommandResult:
    """命令结果：退出码与可序列化的输出"""
    exit_code: int
    data: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.data, ensure_ascii=False, sort_keys=True, indent=2)


class Command(ABC):
    """
    子命令基类

    子类通过 add_arguments 声明命令行参数，CONFIG_PARAMS 校验参数，
    TEXT_TEMPLATE（Jinja2）把 CommandResult.data 渲染为文本输出，
    OUTPUT_SCHEMA 非空时校验 JSON 输出。
    """

    NAME = ""
    HELP = ""
    CONFIG_PARAMS: Dict[str, FieldSchema] = {}
    TEXT_TEMPLATE = "{{ data }}\n"
    OUTPUT_SCHEMA: Optional[Dict[str, Any]] = None

    def __init__(self, config: Dict[str, Any], context: EngineContext):
        self.config = dict(config)
        self.context = context
        self._validate_config_params()

    def _validate_config_params(self):
        """
        验证命令参数是否符合 CONFIG_PARAMS 定义

        Raises:
            ConfigurationError: 缺少必传参数或参数不合法
        """
        validate_config(self.config, self.CONFIG_PARAMS, owner=self.NAME, strict=False)

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        """声明命令行参数（子类可重写）"""
        pass

    def get_config(self, key: str, default: Any = None) -> Any:
        value = self.config.get(key)
        return default if value is None else value

    def setting(self, key: str) -> Any:
        return self.context.get_setting(key)

    async def execute(self) -> CommandResult:
        """
        执行命令

        LucasIdentityError 之外的异常以及引擎异常统一包装为 CommandExecutionError，
        原始异常保存在 original_error 中。
        """
        self.context.log_debug(f"执行命令 {self.NAME}: {self.config}")
        try:
            result = await self.run()
        except CommandExecutionError:
            raise
        except LucasIdentityError as e:
            raise CommandExecutionError(self.NAME, str(e), e) from e
        except Exception as e:
            self.context.log_error(f"命令 {self.NAME} 内部错误: {e}")
            raise CommandExecutionError(self.NAME, f"内部错误: {e}", e) from e
        self._validate_output(result)
        self.context.set_output(self.NAME, result.data)
        return result

    def _validate_output(self, result: CommandResult):
        if self.OUTPUT_SCHEMA is None:
            return
        try:
            validate_document(result.data, self.OUTPUT_SCHEMA)
        except jsonschema.ValidationError as e:
            self.context.log_error(f"命令 {self.NAME} 的输出不符合 Schema: {e.message}")
            raise CommandExecutionError(self.NAME, f"输出不符合 Schema: {e.message}", e) from e

    @abstractmethod
    async def run(self) -> CommandResult:
        """命令逻辑（子类必须实现）"""
        raise NotImplementedError("子类必须实现 run 方法")

    def render_text(self, result: CommandResult) -> str:
        """用 TEXT_TEMPLATE 渲染文本输出"""
        try:
            return _jinja_env.from_string(self.TEXT_TEMPLATE).render(data=result.data, command=self.NAME)
        except TemplateError as e:
            raise CommandExecutionError(self.NAME, f"输出渲染失败: {e}", e) from e


# ===== 参数解析辅助 =====

def parse_rational(text: str, what: str) -> Fraction:
    try:
        return as_rational(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"{what} 不是有理数: {text}") from e


def parse_int_list(text: str, what: str) -> List[int]:
    """"-2,-1,0,1" -> [-2, -1, 0, 1]"""
    try:
        return [int(item) for item in str(text).split(",") if item.strip()]
    except ValueError as e:
        raise ConfigurationError(f"{what} 必须是逗号分隔的整数: {text}") from e


def parse_params(text: Optional[str]) -> Dict[str, Fraction]:
    """"1,-1" 或 "P=1,Q=-1" -> {"P": 1, "Q": -1}"""
    if not text:
        return {}
    items = [item.strip() for item in text.split(",") if item.strip()]
    if all("=" not in item for item in items):
        if len(items) != 2:
            raise ConfigurationError(f"--params 需要 P,Q 两个值: {text}")
        return {"P": parse_rational(items[0], "P"), "Q": parse_rational(items[1], "Q")}
    result = {}
    for item in items:
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in ("P", "Q"):
            raise ConfigurationError(f"--params 只能绑定 P 和 Q: {item}")
        result[key] = parse_rational(value, key)
    return result


def parse_assignments(text: Optional[str], what: str) -> Dict[str, str]:
    """"n=3, m=1" -> {"n": "3", "m": "1"}"""
    if not text:
        return {}
    result = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"{what} 需要 NAME=VALUE 形式: {item.strip()}")
        result[key.strip()] = value.strip()
    return result


def exactly_one(config: Dict[str, Any], keys: List[str], command: str) -> str:
    """要求 keys 中恰好给出一个，返回该键"""
    given = [k for k in keys if config.get(k) not in (None, False)]
    if len(given) != 1:
        options = " | ".join(f"--{k}" for k in keys)
        raise ConfigurationError(f"{command} 需要且只能给出一个: {options}")
    return given[0]


def resolve_template(config: Dict[str, Any], command: str, keys: Optional[List[str]] = None) -> IdentityTemplate:
    """按 --name / --expr / --file 取模板，再应用 --params 和 --bind"""
    source = exactly_one(config, keys or ["name", "expr", "file"], command)
    bindings = {k: _parse_index(k, v) for k, v in parse_assignments(config.get("bind"), "--bind").items()}
    if source == "name":
        # 无 --bind 时使用目录中的默认下标实例
        template = catalog(config["name"]) if bindings else catalog_instance(config["name"])
    elif source == "expr":
        template = parse_identity(config["expr"], name="expr")
    else:
        template = load_lid(config["file"])
    params = parse_params(config.get("params"))
    if params or bindings:
        name = template.name
        template = substitute(template, {**params, **bindings})
        template.name = name
    return template


def _parse_index(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as e:
        raise ConfigurationError(f"--bind 只接受整数下标: {key}={text}") from e
