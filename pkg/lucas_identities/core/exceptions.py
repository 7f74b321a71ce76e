"""恒等式引擎自定义异常"""

from typing import List, Optional


class LucasIdentityError(Exception):
    """引擎基础异常"""
    pass


class AlgebraError(LucasIdentityError):
    """精确代数运算异常"""
    pass


class UnsupportedOperationError(AlgebraError):
    """不支持的运算（如非单项式的负次幂）"""
    pass


class DivisionByZeroError(AlgebraError):
    """除以零有理函数"""
    pass


class EvaluationSingularityError(AlgebraError):
    """代入求值时分母（或负指数的底）为零"""
    def __init__(self, factor: str, message: str = None):
        self.factor = factor
        super().__init__(message or f"求值奇异: 因子 '{factor}' 在该赋值下为零")


class SingularParameterError(LucasIdentityError):
    """序列参数奇异（如 k < 0 时 Q = 0）"""
    pass


class IdentitySyntaxError(LucasIdentityError):
    """恒等式 DSL 语法错误"""
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"第 {line} 行第 {column} 列: {message}")


class UnknownIdentityError(LucasIdentityError):
    """目录中不存在的恒等式名称"""
    def __init__(self, name: str, available: List[str]):
        self.name = name
        self.available = list(available)
        super().__init__(f"未知的恒等式: '{name}'，可用名称: {', '.join(self.available)}")


class PreconditionError(LucasIdentityError):
    """操作的前置条件不满足（如 verify 收到含未知量的模板）"""
    pass


class SamplingFailureError(LucasIdentityError):
    """无法找到足够的非奇异采样点"""
    pass


class SingularSampleError(LucasIdentityError):
    """采样点使某个分母为零"""
    def __init__(self, sample: dict, factor: str):
        self.sample = dict(sample)
        self.factor = factor
        super().__init__(f"采样点 {self.sample} 奇异: 因子 '{factor}' 为零")


class SingularNodeError(LucasIdentityError):
    """插值节点使 U_{d_i-d_j} 为零"""
    pass


class ConfigurationError(LucasIdentityError):
    """配置或命令行参数错误"""
    pass


class CommandExecutionError(LucasIdentityError):
    """子命令执行异常"""
    def __init__(self, command: str, message: str, original_error: Optional[Exception] = None):
        self.command = command
        self.original_error = original_error
        super().__init__(f"命令 '{command}' 执行失败: {message}")
