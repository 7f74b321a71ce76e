"""
插值型恒等式生成器

    U_{k+x}^n = Σ_i U_{k+d_i}^n Π_{j≠i} U_{x-d_j} / U_{d_i-d_j}

以及 x = 0 时按 Q 的幂归一的形式、Horadam 序列在 W_s = 0 时的类比。
"""

import logging
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import RationalFunction, as_rational
from .exceptions import PreconditionError, SingularNodeError
from .identity import IdentityTemplate, IndexExpr, SeqFactor, Term
from .lucas import HoradamParams, horadam, lucas_symbolic

logger = logging.getLogger(__name__)

VARIANTS = ("U", "Q", "W")

_ONE = RationalFunction(1)
_K = IndexExpr.var("k")


def _lucas_value(d: int, params: Mapping[str, object]) -> RationalFunction:
    value = lucas_symbolic("U", d)
    return value.subs(params) if params else value


def _check_nodes(n: int, nodes: Sequence[int]) -> List[int]:
    if n < 1:
        raise PreconditionError(f"n 必须是正整数: {n}")
    nodes = [int(d) for d in nodes]
    if len(nodes) != n + 1:
        raise PreconditionError(f"需要 n + 1 = {n + 1} 个节点，实际 {len(nodes)} 个")
    if len(set(nodes)) != len(nodes):
        raise PreconditionError(f"节点必须互不相同: {nodes}")
    return nodes


def _nonzero(value: RationalFunction, what: str) -> RationalFunction:
    if value.is_zero():
        raise SingularNodeError(f"{what} 为零，节点不可用")
    return value


def interpolation_identity(n: int, nodes: Sequence[int], x: Union[int, str, None] = None, variant: str = "U",
                           params: Optional[Mapping[str, object]] = None,
                           horadam_params: Optional[HoradamParams] = None, s: int = 1) -> IdentityTemplate:
    """
    生成插值恒等式模板

    x 为 None 或字符串时作为符号下标（默认名 x）；variant 取 U、Q（x = 0 的归一形式）或 W。
    params 可把 P、Q 特化为有理数，W 形式需要 horadam_params 且 W_s = 0。
    """
    nodes = _check_nodes(n, nodes)
    variant = variant.upper()
    if variant not in VARIANTS:
        raise PreconditionError(f"未知的插值形式: {variant}，可选: {', '.join(VARIANTS)}")
    params = {k: as_rational(v) for k, v in (params or {}).items()}
    if variant == "Q":
        template = _q_scaled(n, nodes, params)
    elif variant == "W":
        template = _horadam_variant(n, nodes, x, params, horadam_params, s)
    else:
        template = _lagrange(n, nodes, x, params)
    logger.debug("生成插值恒等式 %s", template.name)
    return template


def _x_index(x: Union[int, str, None]) -> Union[int, IndexExpr]:
    if x is None:
        return IndexExpr.var("x")
    if isinstance(x, str):
        return IndexExpr.var(x)
    return int(x)


def _lagrange(n: int, nodes: List[int], x, params) -> IdentityTemplate:
    xi = _x_index(x)
    terms = [Term(_ONE, factors=(SeqFactor("U", _K + xi, n),), side=0)]
    for i, di in enumerate(nodes):
        coefficient = _ONE
        factors = [SeqFactor("U", _K + di, n)]
        for j, dj in enumerate(nodes):
            if i == j:
                continue
            coefficient = coefficient / _nonzero(_lucas_value(di - dj, params), f"U[{di - dj}]")
            if isinstance(xi, int):
                coefficient = coefficient * _lucas_value(xi - dj, params)
            else:
                factors.append(SeqFactor("U", xi - dj))
        terms.append(Term(-coefficient, factors=tuple(factors), side=1))
    label = "x" if not isinstance(xi, int) else str(xi)
    return IdentityTemplate(terms, name=f"INTERP.U{n}[{','.join(map(str, nodes))}|{label}]", params=params)


def _q_scaled(n: int, nodes: List[int], params) -> IdentityTemplate:
    """U_k^n = Σ_i U_{k+d_i}^n / Q^{n d_i} Π_{j≠i} U_{d_j} / U_{d_j-d_i}"""
    q = RationalFunction.coerce(params["Q"]) if "Q" in params else RationalFunction.variable("Q")
    terms = [Term(_ONE, factors=(SeqFactor("U", _K, n),), side=0)]
    for i, di in enumerate(nodes):
        coefficient = _nonzero(q, "Q") ** (-n * di) if di else _ONE
        for j, dj in enumerate(nodes):
            if i == j:
                continue
            coefficient = coefficient * _lucas_value(dj, params) / _nonzero(
                _lucas_value(dj - di, params), f"U[{dj - di}]")
        terms.append(Term(-coefficient, factors=(SeqFactor("U", _K + di, n),), side=1))
    return IdentityTemplate(terms, name=f"INTERP.Q{n}[{','.join(map(str, nodes))}]", params=params)


def default_horadam() -> HoradamParams:
    """a0 = 1, a1 = 0 时 W_1 = 0，W_k = p1·U_{k-1}(p0, -p1)"""
    return HoradamParams(1, 0, RationalFunction.variable("p0"), RationalFunction.variable("p1"))


def _horadam_variant(n: int, nodes: List[int], x, params, h: Optional[HoradamParams], s: int) -> IdentityTemplate:
    h = h or default_horadam()
    if not RationalFunction.coerce(horadam(h, s)).is_zero():
        raise PreconditionError(f"Horadam 形式要求 W_{s} = 0")
    xi = _x_index(x)
    terms = [Term(_ONE, factors=(SeqFactor("W", _K + xi, n),), side=0)]
    for i, di in enumerate(nodes):
        coefficient = _ONE
        factors = [SeqFactor("W", _K + di, n)]
        for j, dj in enumerate(nodes):
            if i == j:
                continue
            denominator = RationalFunction.coerce(horadam(h, di - dj + s))
            coefficient = coefficient / _nonzero(denominator, f"W[{di - dj + s}]")
            if isinstance(xi, int):
                coefficient = coefficient * RationalFunction.coerce(horadam(h, xi - dj + s))
            else:
                factors.append(SeqFactor("W", xi - dj + s))
        terms.append(Term(-coefficient, factors=tuple(factors), side=1))
    label = "x" if not isinstance(xi, int) else str(xi)
    return IdentityTemplate(terms, name=f"INTERP.W{n}[{','.join(map(str, nodes))}|{label}]",
                            params=params, horadam=h)


def search_nodes(n: int, x: int, target: IdentityTemplate, node_range: int = 3,
                 params: Optional[Mapping[str, object]] = None) -> List[Tuple[int, ...]]:
    """在 [-node_range, node_range] 中搜索使插值恒等式与 target 结构相等的节点组"""
    params = dict(target.params) if params is None else params
    found = []
    for nodes in combinations(range(-node_range, node_range + 1), n + 1):
        try:
            candidate = interpolation_identity(n, nodes, x, params=params)
        except SingularNodeError:
            continue
        if candidate.term_map() == target.term_map() and candidate.used_index_vars() == target.used_index_vars():
            found.append(nodes)
    logger.info("节点搜索 n=%d x=%d: 找到 %d 组", n, x, len(found))
    return found


def fibonacci_coefficients(template: IdentityTemplate) -> Dict[int, RationalFunction]:
    """右侧各 U[k+d]^n 的系数（按 d 索引），用于与已知 Fibonacci 恒等式比对"""
    result = {}
    for t in template.terms:
        if t.side != 1 or len(t.factors) != 1:
            continue
        f = t.factors[0]
        if f.index.coeffs == (("k", 1),):
            result[f.index.constant] = -t.coefficient
    return result
