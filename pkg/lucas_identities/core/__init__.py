"""恒等式引擎核心模块"""

from .algebra import LaurentPoly, RationalFunction, factor_list, poly_gcd, render_poly, render_ratfunc, symbols
from .lucas import (
    HoradamParams, LucasPair, SequenceParams, horadam, lucas_numeric, lucas_symbolic, lucas_v_numeric,
    matrix_closed_form, matrix_power,
)
from .identity import IdentityTemplate, IndexExpr, SeqFactor, Term, bind_unknowns, substitute
from .dsl import load_lid, parse_identity, parse_lid, render, template_from_dict, template_to_dict
from .catalog import catalog, catalog_instance, catalog_metadata, catalog_names
from .verifier import Verdict, VerdictStatus, numeric_check, verify, verify_all
from .discover import (
    AnsatzSystem, DiscoveryResult, SolutionReport, build_system, default_samples, discover,
    power_representation, solve, power_ansatz,
)
from .interpolation import interpolation_identity, search_nodes
from .context import EngineContext
from .parameter import FieldSchema, FieldSchemaDef, SETTINGS_SCHEMA, load_settings
from .exceptions import (
    LucasIdentityError,
    AlgebraError,
    SingularParameterError,
    IdentitySyntaxError,
    UnknownIdentityError,
    PreconditionError,
    SamplingFailureError,
    SingularSampleError,
    SingularNodeError,
    ConfigurationError,
    CommandExecutionError,
)

__all__ = [
    # 代数
    'LaurentPoly',
    'RationalFunction',
    'factor_list',
    'poly_gcd',
    'render_poly',
    'render_ratfunc',
    'symbols',
    # 序列
    'SequenceParams',
    'HoradamParams',
    'LucasPair',
    'lucas_symbolic',
    'lucas_numeric',
    'lucas_v_numeric',
    'matrix_power',
    'matrix_closed_form',
    'horadam',
    # 恒等式模型与 DSL
    'IdentityTemplate',
    'IndexExpr',
    'SeqFactor',
    'Term',
    'substitute',
    'bind_unknowns',
    'parse_identity',
    'parse_lid',
    'load_lid',
    'render',
    'template_to_dict',
    'template_from_dict',
    # 目录
    'catalog',
    'catalog_names',
    'catalog_metadata',
    'catalog_instance',
    # 验证与发现
    'Verdict',
    'VerdictStatus',
    'verify',
    'verify_all',
    'numeric_check',
    'AnsatzSystem',
    'SolutionReport',
    'DiscoveryResult',
    'build_system',
    'default_samples',
    'solve',
    'discover',
    'power_ansatz',
    'power_representation',
    'interpolation_identity',
    'search_nodes',
    # 上下文和配置
    'EngineContext',
    'FieldSchema',
    'FieldSchemaDef',
    'SETTINGS_SCHEMA',
    'load_settings',
    # 异常
    'LucasIdentityError',
    'AlgebraError',
    'SingularParameterError',
    'IdentitySyntaxError',
    'UnknownIdentityError',
    'PreconditionError',
    'SamplingFailureError',
    'SingularSampleError',
    'SingularNodeError',
    'ConfigurationError',
    'CommandExecutionError',
]
