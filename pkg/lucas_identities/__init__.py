"""
Lucas 序列恒等式引擎

用 Binet 展开符号验证 U_k(P,Q)、V_k(P,Q) 及 Horadam 序列的恒等式，
用待定系数法从含未知系数的模板中发现新的恒等式。
"""

__version__ = "0.1.0"

from .core import (
    IdentityTemplate,
    Verdict,
    VerdictStatus,
    catalog,
    discover,
    parse_identity,
    verify,
    LucasIdentityError,
    ConfigurationError,
)

__all__ = [
    'IdentityTemplate',
    'Verdict',
    'VerdictStatus',
    'catalog',
    'discover',
    'parse_identity',
    'verify',
    'LucasIdentityError',
    'ConfigurationError',
]
