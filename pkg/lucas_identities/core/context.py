"""命令执行上下文"""

import logging
import time
from datetime import datetime
from typing import Any, Dict, Optional

# 设置日志
logger = logging.getLogger(__name__)


class EngineContext:
    """
    命令执行上下文
    保存全局设置（seed、trials 等）和各命令的输出
    """

    def __init__(self, settings: Optional[Dict[str, Any]] = None):
        # 全局设置（已经过 SETTINGS_SCHEMA 校验）
        self._settings: Dict[str, Any] = dict(settings or {})
        # 存储每个命令的输出结果
        self._outputs: Dict[str, Any] = {}
        # 执行开始时间
        self.start_time = datetime.now()
        self._timers: Dict[str, float] = {}

    def get_setting(self, key: str, default: Any = None) -> Any:
        """获取全局设置"""
        return self._settings.get(key, default)

    def set_setting(self, key: str, value: Any):
        self._settings[key] = value

    def get_all_settings(self) -> Dict[str, Any]:
        """获取全部设置"""
        return self._settings.copy()

    def set_output(self, command: str, output: Any):
        """保存命令输出"""
        self._outputs[command] = output
        self.log_debug(f"命令 '{command}' 输出已保存")

    def get_output(self, command: str, field: str = None) -> Any:
        """
        获取命令输出

        Args:
            command: 命令名称
            field: 可选字段名，输出为字典时返回该字段

        Examples:
            context.get_output("verify")            # 整个输出
            context.get_output("verify", "status")  # output["status"]
        """
        output = self._outputs.get(command)
        if output is None or field is None:
            return output
        if isinstance(output, dict):
            return output.get(field)
        return getattr(output, field, None)

    def start_timer(self, label: str):
        self._timers[label] = time.perf_counter()

    def stop_timer(self, label: str) -> float:
        """返回自 start_timer 以来经过的秒数"""
        started = self._timers.pop(label, None)
        if started is None:
            raise KeyError(f"计时器 '{label}' 未启动")
        return time.perf_counter() - started

    def _log(self, message: str, level):
        """记录日志"""
        logger.log(level, message)

    def log_error(self, message: str):
        """记录错误日志"""
        self._log(message, logging.ERROR)

    def log_warning(self, message: str):
        """记录警告日志"""
        self._log(message, logging.WARNING)

    def log_info(self, message: str):
        """记录信息日志"""
        self._log(message, logging.INFO)

    def log_debug(self, message: str):
        self._log(message, logging.DEBUG)

    def get_all_outputs(self) -> Dict[str, Any]:
        """获取所有命令的输出"""
        return self._outputs.copy()

    def clear(self):
        """清空输出（保留设置）"""
        self._outputs.clear()
        self._timers.clear()
        self.start_time = datetime.now()
