"""
内置恒等式目录

条目以 DSL 文本保存在 data/catalog.yaml 中，首次访问时解析并缓存；
返回的模板不可变，可在多线程中共享。
"""

import logging
import re
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List

import yaml

from .dsl import parse_identity
from .exceptions import ConfigurationError, UnknownIdentityError
from .identity import IdentityTemplate, substitute

logger = logging.getLogger(__name__)

CATALOG_FILE = Path(__file__).resolve().parent.parent / "data" / "catalog.yaml"
_CATALAN_RE = re.compile(r"^CAT\.(-?\d+)$")
_LISTED_CATALAN = range(1, 7)


@lru_cache(maxsize=1)
def _load_catalog() -> Dict[str, Any]:
    try:
        with open(CATALOG_FILE, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"无法加载恒等式目录 {CATALOG_FILE}: {exc}") from exc
    if not isinstance(data, dict) or "identities" not in data:
        raise ConfigurationError("恒等式目录格式错误: 缺少 identities")
    return data


def catalog_names() -> List[str]:
    """目录中的全部名称（文件顺序，末尾附 CAT.1 - CAT.6）"""
    names = list(_load_catalog()["identities"])
    names.extend(f"CAT.{n}" for n in _LISTED_CATALAN)
    return names


@lru_cache(maxsize=None)
def catalog(name: str) -> IdentityTemplate:
    """
    按名称取目录中的恒等式

    CAT.n 是 GF.2 在 n 取定值时的 Catalan 恒等式，n 可以是任意整数。
    """
    data = _load_catalog()
    match = _CATALAN_RE.match(name)
    if match:
        n = int(match.group(1))
        base = catalog(data.get("catalan", {}).get("base", "GF.2"))
        template = substitute(base, {"n": n})
        template.name = name
        return template
    entry = data["identities"].get(name)
    if entry is None:
        raise UnknownIdentityError(name, catalog_names())
    template = parse_identity(entry["expr"], name=name, params=entry.get("specialize"))
    logger.debug("加载目录恒等式 %s", name)
    return template


def catalog_metadata(name: str) -> Dict[str, Any]:
    """名称、说明、默认下标实例与系数分母导出的非零条件"""
    data = _load_catalog()
    match = _CATALAN_RE.match(name)
    if match:
        entry = {"description": f"Catalan 恒等式（n = {match.group(1)}）"}
    else:
        entry = data["identities"].get(name)
        if entry is None:
            raise UnknownIdentityError(name, catalog_names())
    template = catalog(name)
    return {
        "name": name,
        "description": entry.get("description", ""),
        "specialize": dict(entry.get("specialize") or {}),
        "instance": dict(entry.get("instance") or {}),
        "index_vars": list(template.index_vars),
        "guards": template.guards(),
    }


def catalog_instance(name: str) -> IdentityTemplate:
    """带默认下标实例的目录恒等式（无实例时即原模板）"""
    instance = catalog_metadata(name)["instance"]
    template = catalog(name)
    if not instance:
        return template
    bound = substitute(template, instance)
    bound.name = name
    return bound
