"""参数系统：配置字段定义、Schema 校验和设置文件加载"""

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from .exceptions import ConfigurationError

# 字段定义类型（用于 CONFIG_PARAMS 和 SETTINGS_SCHEMA）
# - 简单格式: "integer"
# - 详细格式: {
#     "type": "integer",
#     "required": True,
#     "description": "字段说明",
#     "default": 0,
#     "min": 1,
#     "choices": ["a", "b"]
#   }
FieldSchemaDef = Union[str, Dict[str, Any]]

# 类型映射表（共享）
TYPE_MAP = {
    'string': str,
    'integer': int,
    'float': (int, float),
    'boolean': bool,
    'dict': dict,
    'list': list,
    'any': object
}


class FieldSchema:
    """
    字段定义 Schema

    封装字段定义的解析、验证和默认值处理逻辑
    """

    TYPE_MAP = TYPE_MAP

    def __init__(self, field_def: FieldSchemaDef):
        self._parse(field_def)

    def _parse(self, field_def: FieldSchemaDef):
        """解析字段定义"""
        if isinstance(field_def, str):
            self.type = field_def
            self.required = False
            self.description = ""
            self.default = None
            self.min = None
            self.choices = None
        elif isinstance(field_def, dict):
            self.type = field_def.get("type", "any")
            self.required = field_def.get("required", False)
            self.description = field_def.get("description", "")
            self.default = field_def.get("default", None)
            self.min = field_def.get("min", None)
            self.choices = field_def.get("choices", None)
        else:
            raise ConfigurationError(f"无效的字段定义格式: {field_def}")
        if self.type not in self.TYPE_MAP:
            raise ConfigurationError(f"未知的字段类型: {self.type}")

    def validate_value(self, value: Any, param_name: str = "") -> None:
        """
        验证值是否符合字段定义

        Raises:
            TypeError: 类型不匹配
            ValueError: 超出取值范围
        """
        if value is None:
            return  # None 值由调用方处理（应用默认值或检查必传）

        expected_type = self.TYPE_MAP[self.type]
        if expected_type is not object:
            # bool 是 int 的子类，整数字段不接受布尔值
            if self.type in ("integer", "float") and isinstance(value, bool):
                raise TypeError(f"类型不匹配: 期望 {self.type}, 实际 bool")
            if not isinstance(value, expected_type):
                raise TypeError(f"类型不匹配: 期望 {self.type}, 实际 {type(value).__name__}")
        if self.min is not None and value < self.min:
            raise ValueError(f"取值 {value} 小于下限 {self.min}")
        if self.choices is not None and value not in self.choices:
            raise ValueError(f"取值 {value!r} 不在 {self.choices} 中")

    def get_default(self) -> Any:
        return self.default

    def is_required(self) -> bool:
        return self.required

    def get_description(self) -> str:
        return self.description

    def apply_default(self, config: Dict[str, Any], param_name: str) -> Any:
        """
        应用默认值到配置字典（如果值不存在且有默认值）

        Returns:
            参数值（可能是原始值或默认值）
        """
        value = config.get(param_name)
        if value is None and self.default is not None:
            config[param_name] = self.default
            return self.default
        return value

    def validate_and_apply(self, config: Dict[str, Any], param_name: str, owner: str = "") -> None:
        """
        验证并应用默认值（完整流程）

        Args:
            config: 配置字典
            param_name: 参数名称
            owner: 配置所属的命令或文件（用于错误信息）

        Raises:
            ConfigurationError: 缺少必传参数或参数不合法
        """
        value = self.apply_default(config, param_name)
        prefix = f"{owner} " if owner else ""

        if value is None and self.required:
            error_msg = f"{prefix}缺少必传参数: {param_name}"
            if self.description:
                error_msg += f" ({self.description})"
            raise ConfigurationError(error_msg)

        if value is not None:
            try:
                self.validate_value(value, param_name)
            except (TypeError, ValueError) as e:
                error_msg = f"{prefix}参数 {param_name} 验证失败: {e}"
                if self.description:
                    error_msg += f" ({self.description})"
                raise ConfigurationError(error_msg) from e

    @classmethod
    def from_def(cls, field_def: FieldSchemaDef) -> 'FieldSchema':
        """从字段定义创建 FieldSchema 实例（工厂方法）"""
        return cls(field_def)

    def __repr__(self):
        return (f"FieldSchema(type={self.type!r}, required={self.required}, "
                f"description={self.description!r}, default={self.default!r})")


# 全局设置
SETTINGS_SCHEMA: Dict[str, FieldSchema] = {
    "seed": FieldSchema({"type": "integer", "default": 0, "description": "随机数种子"}),
    "trials": FieldSchema({"type": "integer", "default": 200, "min": 1, "description": "数值检验的有效采样次数"}),
    "sample_range": FieldSchema({"type": "integer", "default": 9, "min": 1,
                                 "description": "随机参数分子分母的取值界"}),
    "index_range": FieldSchema({"type": "integer", "default": 6, "min": 0, "description": "随机下标的取值界"}),
    "workers": FieldSchema({"type": "integer", "default": 1, "min": 1, "description": "并发验证的工作线程数"}),
}


def validate_config(config: Dict[str, Any], schema: Mapping[str, FieldSchema], owner: str = "",
                    strict: bool = True) -> Dict[str, Any]:
    """按 schema 校验配置字典并填充默认值；strict 时拒绝未声明的键"""
    if strict:
        unknown = sorted(set(config) - set(schema))
        if unknown:
            raise ConfigurationError(f"{owner + ' ' if owner else ''}未知参数: {', '.join(unknown)}")
    for name, field_schema in schema.items():
        field_schema.validate_and_apply(config, name, owner)
    return config


def load_settings(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """
    加载设置文件（YAML 或 JSON），合并覆盖项后校验

    Args:
        path: 设置文件路径，为 None 时只使用默认值
        overrides: 优先级更高的设置（值为 None 的项忽略）
    """
    settings: Dict[str, Any] = {}
    if path is not None:
        settings_file = Path(path)
        if not settings_file.exists():
            raise ConfigurationError(f"设置文件不存在: {path}")
        try:
            if settings_file.suffix in ['.yaml', '.yml']:
                with open(settings_file, 'r', encoding='utf-8') as f:
                    data = yaml.safe_load(f)
            elif settings_file.suffix == '.json':
                with open(settings_file, 'r', encoding='utf-8') as f:
                    data = json.load(f)
            else:
                raise ConfigurationError(f"不支持的设置文件格式: {settings_file.suffix}")
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"设置文件解析失败: {e}") from e
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigurationError("设置文件顶层必须是字典")
        settings.update(data)
    for key, value in (overrides or {}).items():
        if value is not None:
            settings[key] = value
    return validate_config(settings, SETTINGS_SCHEMA, owner=str(path) if path else "")
