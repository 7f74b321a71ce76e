"""
恒等式的形式语言：仿射下标、序列因子、项与恒等式模板

模板的语义：对下标变量的每个整数赋值（系数有定义处），各项之和恒为零。
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .algebra import LaurentPoly, RationalFunction, as_rational, factor_list
from .exceptions import EvaluationSingularityError, LucasIdentityError, DivisionByZeroError
from .lucas import HoradamParams, SequenceParams, horadam, lucas_numeric, lucas_symbolic, specialize

logger = logging.getLogger(__name__)

SEQUENCE_KINDS = ("U", "V", "W")
PARAMETER_NAMES = ("P", "Q")
HORADAM_NAMES = ("a0", "a1", "p0", "p1")
RESERVED_NAMES = SEQUENCE_KINDS + PARAMETER_NAMES + HORADAM_NAMES

_Q = RationalFunction.variable("Q")


@dataclass(frozen=True)
class IndexExpr:
    """仿射下标 Σ a_i k_i + d（不存储零系数，变量按名称排序）"""
    coeffs: Tuple[Tuple[str, int], ...] = ()
    constant: int = 0

    @classmethod
    def build(cls, coeffs: Mapping[str, int] = None, constant: int = 0) -> "IndexExpr":
        items = tuple(sorted((v, int(a)) for v, a in (coeffs or {}).items() if a))
        return cls(items, int(constant))

    @classmethod
    def var(cls, name: str, coeff: int = 1) -> "IndexExpr":
        return cls.build({name: coeff})

    @classmethod
    def const(cls, value: int) -> "IndexExpr":
        return cls((), int(value))

    def as_dict(self) -> Dict[str, int]:
        return dict(self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def variables(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def __add__(self, other: Union["IndexExpr", int]) -> "IndexExpr":
        if isinstance(other, int):
            return IndexExpr(self.coeffs, self.constant + other)
        merged = self.as_dict()
        for v, a in other.coeffs:
            merged[v] = merged.get(v, 0) + a
        return IndexExpr.build(merged, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self) -> "IndexExpr":
        return self.scale(-1)

    def __sub__(self, other: Union["IndexExpr", int]) -> "IndexExpr":
        return self + (-other)

    def scale(self, factor: int) -> "IndexExpr":
        return IndexExpr.build({v: a * factor for v, a in self.coeffs}, self.constant * factor)

    def substitute(self, bindings: Mapping[str, Union[int, "IndexExpr"]]) -> "IndexExpr":
        result = IndexExpr.const(self.constant)
        for v, a in self.coeffs:
            value = bindings.get(v, IndexExpr.var(v))
            if isinstance(value, int):
                value = IndexExpr.const(value)
            result = result + value.scale(a)
        return result

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        return self.constant + sum(a * assignment[v] for v, a in self.coeffs)

    def without_constant(self) -> "IndexExpr":
        return IndexExpr(self.coeffs, 0)

    def sort_key(self):
        return (self.coeffs, self.constant)

    def __str__(self) -> str:
        pieces = []
        for v, a in self.coeffs:
            body = v if abs(a) == 1 else f"{abs(a)}{v}"
            pieces.append(("-" if a < 0 else "+", body))
        if self.constant or not pieces:
            pieces.append(("-" if self.constant < 0 else "+", str(abs(self.constant))))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += sign + body
        return text


@dataclass(frozen=True)
class SeqFactor:
    """序列因子 U/V/W[index]^exponent；负指数表示该因子在分母中"""
    kind: str
    index: IndexExpr
    exponent: int = 1

    def sort_key(self):
        return (self.kind, self.index.sort_key())

    def __str__(self) -> str:
        base = f"{self.kind}[{self.index}]"
        if self.exponent == 1:
            return base
        if self.exponent < 0:
            return f"{base}^({self.exponent})"
        return f"{base}^{self.exponent}"


ZERO_INDEX = IndexExpr()


@dataclass(frozen=True)
class Term:
    """
    项：coefficient × [unknown] × Q^{q_exponent} × Π factors

    unknown 为空时系数已知；否则系数是未知量的已知乘子。
    side 只用于渲染（0 表示等号左侧，1 表示右侧），不参与相等比较。
    """
    coefficient: RationalFunction
    unknown: Optional[str] = None
    q_exponent: IndexExpr = ZERO_INDEX
    factors: Tuple[SeqFactor, ...] = ()
    side: int = field(default=0, compare=False)

    @property
    def key(self):
        return (self.unknown, self.q_exponent, self.factors)

    def is_known(self) -> bool:
        return self.unknown is None

    def index_variables(self) -> Tuple[str, ...]:
        names = set(self.q_exponent.variables())
        for f in self.factors:
            names.update(f.index.variables())
        return tuple(sorted(names))


class TermSum:
    """
    项的有序和（解析器与模板改写使用的表达式代数）

    相同 key 的项合并系数，保留首次出现的位置与 side。
    """

    def __init__(self, terms: Iterable[Term] = ()):
        self._terms: Dict[tuple, Term] = {}
        for term in terms:
            self._accumulate(term)

    @classmethod
    def constant(cls, value) -> "TermSum":
        value = RationalFunction.coerce(value)
        return cls([Term(value)]) if not value.is_zero() else cls()

    @classmethod
    def unknown(cls, name: str) -> "TermSum":
        return cls([Term(RationalFunction(1), unknown=name)])

    @classmethod
    def factor(cls, factor: SeqFactor) -> "TermSum":
        return cls([Term(RationalFunction(1), factors=(factor,))])

    @classmethod
    def q_power(cls, exponent: IndexExpr) -> "TermSum":
        return cls([Term(RationalFunction(1), q_exponent=exponent)])

    def _accumulate(self, term: Term):
        if term.coefficient.is_zero():
            return
        existing = self._terms.get(term.key)
        if existing is None:
            self._terms[term.key] = term
            return
        total = existing.coefficient + term.coefficient
        if total.is_zero():
            del self._terms[term.key]
        else:
            self._terms[term.key] = replace(existing, coefficient=total)

    @property
    def terms(self) -> List[Term]:
        return list(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def as_constant(self) -> Optional[RationalFunction]:
        """若只含常数项（无未知量、无因子），返回其系数"""
        if self.is_zero():
            return RationalFunction(0)
        if len(self._terms) == 1:
            (term,) = self._terms.values()
            if term.unknown is None and not term.factors and term.q_exponent == ZERO_INDEX:
                return term.coefficient
        return None

    def with_side(self, side: int) -> "TermSum":
        return TermSum(replace(t, side=side) for t in self.terms)

    def __add__(self, other: "TermSum") -> "TermSum":
        return TermSum(self.terms + other.terms)

    def __neg__(self) -> "TermSum":
        return TermSum(replace(t, coefficient=-t.coefficient) for t in self.terms)

    def __sub__(self, other: "TermSum") -> "TermSum":
        return self + (-other)

    def __mul__(self, other: "TermSum") -> "TermSum":
        result = TermSum()
        for a in self.terms:
            for b in other.terms:
                result._accumulate(multiply_terms(a, b))
        return result

    def __pow__(self, exponent: int) -> "TermSum":
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = TermSum.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def reciprocal(self) -> "TermSum":
        """只允许对单个已知项取倒数"""
        if len(self._terms) != 1:
            raise LucasIdentityError("只能除以单项（系数、Q 的幂与序列因子之积）")
        (term,) = self._terms.values()
        if term.unknown is not None:
            raise LucasIdentityError(f"不能除以未知量 {term.unknown}")
        return TermSum([Term(
            term.coefficient.inverse(),
            q_exponent=-term.q_exponent,
            factors=tuple(replace(f, exponent=-f.exponent) for f in term.factors),
        )])

    def __truediv__(self, other: "TermSum") -> "TermSum":
        return self * other.reciprocal()


def multiply_terms(a: Term, b: Term) -> Term:
    if a.unknown is not None and b.unknown is not None:
        raise LucasIdentityError(f"未知量不能相乘: {a.unknown}*{b.unknown}")
    merged: Dict[tuple, int] = {}
    for f in a.factors + b.factors:
        key = (f.kind, f.index)
        merged[key] = merged.get(key, 0) + f.exponent
    factors = tuple(sorted(
        (SeqFactor(kind, index, e) for (kind, index), e in merged.items() if e),
        key=SeqFactor.sort_key))
    return Term(
        a.coefficient * b.coefficient,
        unknown=a.unknown or b.unknown,
        q_exponent=a.q_exponent + b.q_exponent,
        factors=factors,
        side=a.side,
    )


class IdentityTemplate:
    """
    恒等式模板：Σ terms ≡ 0

    params 记录已特化为有理数的参数（如 F_k = U_k(1, -1) 时 {P: 1, Q: -1}），
    horadam 记录 W 因子所引用的 Horadam 参数。
    """

    def __init__(self, terms: Iterable[Term], index_vars: Iterable[str] = None, name: Optional[str] = None,
                 params: Optional[Mapping[str, Fraction]] = None, horadam: Optional[HoradamParams] = None):
        self.name = name
        self.params: Dict[str, Fraction] = {k: as_rational(v) for k, v in (params or {}).items()}
        self.horadam = horadam
        self.terms: Tuple[Term, ...] = tuple(_canonical_terms(terms, self.params, horadam))
        found = sorted({v for t in self.terms for v in t.index_variables()})
        declared = list(index_vars or [])
        self.index_vars: Tuple[str, ...] = tuple(sorted(set(found) | set(declared)))

    # ===== 查询 =====

    def is_zero(self) -> bool:
        return not self.terms

    def unknowns(self) -> Tuple[str, ...]:
        seen = []
        for t in self.terms:
            if t.unknown is not None and t.unknown not in seen:
                seen.append(t.unknown)
        return tuple(seen)

    def is_fully_known(self) -> bool:
        return all(t.is_known() for t in self.terms)

    def primary_index(self) -> Optional[str]:
        if "k" in self.index_vars:
            return "k"
        return self.index_vars[0] if self.index_vars else None

    def uses_kind(self, kind: str) -> bool:
        return any(f.kind == kind for t in self.terms for f in t.factors)

    def has_symbolic_denominators(self) -> bool:
        """是否存在自由下标的分母因子（需先绑定下标才能展开）"""
        return any(f.exponent < 0 for t in self.terms for f in t.factors)

    def guards(self) -> List[str]:
        """由已知系数分母导出的非零条件，如 ['P != 0']"""
        conditions = []
        for t in self.terms:
            for factor, _ in factor_list(t.coefficient.den):
                text = f"{factor} != 0"
                if text not in conditions:
                    conditions.append(text)
        return conditions

    def with_terms(self, terms: Iterable[Term], name: Optional[str] = None) -> "IdentityTemplate":
        return IdentityTemplate(terms, self.index_vars, name if name is not None else self.name,
                                self.params, self.horadam)

    def to_sum(self) -> TermSum:
        return TermSum(self.terms)

    def __add__(self, other: "IdentityTemplate") -> "IdentityTemplate":
        return self.with_terms((self.to_sum() + other.to_sum()).terms, name=None)

    def term_map(self) -> Dict[tuple, RationalFunction]:
        return {t.key: t.coefficient for t in self.terms}

    def used_index_vars(self) -> Tuple[str, ...]:
        """实际出现在项中的下标变量（代换后可能少于声明的 index_vars）"""
        return tuple(sorted({v for t in self.terms for v in t.index_variables()}))

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdentityTemplate):
            return NotImplemented
        return (self.term_map() == other.term_map() and self.used_index_vars() == other.used_index_vars()
                and self.params == other.params and self.horadam == other.horadam)

    def __hash__(self):
        return hash((frozenset(self.term_map().items()), self.used_index_vars()))

    def __repr__(self) -> str:
        from .dsl import render_text
        return f"<IdentityTemplate {self.name or ''} {render_text(self)}>"


def _param_value(name: str, params: Mapping[str, Fraction]):
    return params[name] if name in params else RationalFunction.variable(name)


def _constant_factor_value(factor: SeqFactor, params: Mapping[str, Fraction],
                           horadam_params: Optional[HoradamParams]) -> RationalFunction:
    k = factor.index.constant
    if factor.kind == "W":
        if horadam_params is None:
            raise LucasIdentityError("W 因子需要 Horadam 参数声明（@params）")
        value = RationalFunction.coerce(horadam(horadam_params, k))
    else:
        value = lucas_symbolic(factor.kind, k)
        if params:
            value = value.subs(params)
    if value.is_zero() and factor.exponent < 0:
        raise EvaluationSingularityError(str(SeqFactor(factor.kind, factor.index)))
    return value ** factor.exponent


def _canonical_terms(terms: Iterable[Term], params, horadam_params) -> List[Term]:
    """折叠常数下标因子与 Q 的常数幂，合并同类项"""
    result = TermSum()
    for term in terms:
        coefficient = term.coefficient
        if params:
            coefficient = coefficient.subs(params)
        q = term.q_exponent
        if q.constant:
            coefficient = coefficient * RationalFunction.coerce(_param_value("Q", params)) ** q.constant
            q = q.without_constant()
        factors = []
        for f in term.factors:
            if f.index.is_constant():
                coefficient = coefficient * _constant_factor_value(f, params, horadam_params)
            else:
                factors.append(f)
        result._accumulate(Term(coefficient, term.unknown, q, tuple(factors), term.side))
    merged = []
    for term in sorted(result.terms, key=lambda t: t.side):
        factors = tuple(sorted(term.factors, key=SeqFactor.sort_key))
        merged.append(replace(term, factors=factors))
    return merged


# ===== 代换 =====

def substitute(template: IdentityTemplate, bindings: Mapping[str, object]) -> IdentityTemplate:
    """
    特化模板

    P、Q 绑定为有理数（记入 params）；a0、a1、p0、p1 绑定 Horadam 参数；
    其余名称视为下标变量，绑定为整数（或仿射下标）。
    """
    params = dict(template.params)
    horadam_params = template.horadam
    index_bindings: Dict[str, Union[int, IndexExpr]] = {}
    horadam_bindings = {}
    coefficient_bindings = {}
    for name, value in bindings.items():
        if name in PARAMETER_NAMES:
            if isinstance(value, RationalFunction):
                if not value.is_constant():
                    raise LucasIdentityError(f"参数 {name} 只能绑定为有理数")
                value = value.constant_value()
            params[name] = as_rational(value)
        elif name in HORADAM_NAMES:
            horadam_bindings[name] = value
            coefficient_bindings[name] = RationalFunction.coerce(
                value if not isinstance(value, int) else Fraction(value))
        elif isinstance(value, (int, IndexExpr)):
            index_bindings[name] = value
        else:
            raise LucasIdentityError(f"下标变量 {name} 只能绑定为整数")
    if horadam_bindings and horadam_params is not None:
        horadam_params = HoradamParams(**{
            n: horadam_bindings.get(n, getattr(horadam_params, n)) for n in HORADAM_NAMES})
    terms = []
    for t in template.terms:
        coefficient = t.coefficient
        if coefficient_bindings:
            try:
                coefficient = coefficient.subs(coefficient_bindings)
            except DivisionByZeroError as exc:
                raise EvaluationSingularityError(str(t.coefficient.den)) from exc
        terms.append(Term(
            coefficient, t.unknown, t.q_exponent.substitute(index_bindings),
            tuple(replace(f, index=f.index.substitute(index_bindings)) for f in t.factors), t.side))
    remaining = [v for v in template.index_vars if v not in index_bindings]
    try:
        return IdentityTemplate(terms, remaining, template.name, params, horadam_params)
    except DivisionByZeroError as exc:
        raise EvaluationSingularityError(str(exc)) from exc


def bind_unknowns(template: IdentityTemplate, values: Mapping[str, RationalFunction],
                  name: Optional[str] = None) -> IdentityTemplate:
    """把未知量替换为已知系数"""
    terms = []
    for t in template.terms:
        if t.unknown is None:
            terms.append(t)
        else:
            value = RationalFunction.coerce(values[t.unknown])
            terms.append(Term(t.coefficient * value, None, t.q_exponent, t.factors, t.side))
    return template.with_terms(terms, name=name)


# ===== 求值 =====

class TermEvaluator:
    """
    在给定参数与下标赋值下计算各项的值

    params 为 None 时按 Q(P, Q) 符号计算；否则为有理数（可含 a0..p1）。
    """

    def __init__(self, template: IdentityTemplate, values: Optional[Mapping[str, Fraction]] = None):
        self.template = template
        self.values: Optional[Dict[str, Fraction]] = None
        if values is not None:
            self.values = dict(template.params)
            self.values.update({k: as_rational(v) for k, v in values.items()})
        self._sequence = None
        if self.values is not None and "P" in self.values and "Q" in self.values:
            self._sequence = SequenceParams(self.values["P"], self.values["Q"])
        self._horadam = template.horadam
        if template.horadam is not None and self.values is not None:
            self._horadam = HoradamParams(*(
                _numeric(getattr(template.horadam, n), self.values) for n in HORADAM_NAMES))

    def _coefficient(self, c: RationalFunction):
        if self.values is None:
            return c
        return c.evaluate(self.values)

    def _sequence_value(self, kind: str, k: int):
        if kind == "W":
            return horadam(self._horadam, k)
        if self._sequence is None:
            value = lucas_symbolic(kind, k)
            if self.template.params:
                value = value.subs(self.template.params)
            return value
        pair = lucas_numeric(self._sequence, k)
        if kind == "U":
            return pair.u_k
        return 2 * pair.u_k1 - self._sequence.P * pair.u_k

    def _q(self):
        if self.values is not None:
            return self.values["Q"]
        return RationalFunction.coerce(_param_value("Q", self.template.params))

    def term_value(self, term: Term, assignment: Mapping[str, int], include_coefficient: bool = True):
        value = self._coefficient(term.coefficient) if include_coefficient else Fraction(1)
        if term.q_exponent != ZERO_INDEX:
            e = term.q_exponent.evaluate(assignment)
            q = self._q()
            if e < 0 and (q == 0 if not isinstance(q, RationalFunction) else q.is_zero()):
                raise EvaluationSingularityError("Q")
            value = value * q ** e
        for f in term.factors:
            s = self._sequence_value(f.kind, f.index.evaluate(assignment))
            if f.exponent < 0 and (s.is_zero() if isinstance(s, RationalFunction) else s == 0):
                raise EvaluationSingularityError(f"{f.kind}[{f.index.evaluate(assignment)}]")
            value = value * s ** f.exponent
        return value

    def evaluate(self, assignment: Mapping[str, int]):
        """返回 {未知量名或 None: 值}；None 对应已知项之和"""
        totals: Dict[Optional[str], object] = {}
        for term in self.template.terms:
            v = self.term_value(term, assignment)
            totals[term.unknown] = totals.get(term.unknown, 0) + v
        return totals


def _numeric(value, values: Mapping[str, Fraction]):
    if isinstance(value, RationalFunction):
        return value.evaluate(values)
    return value
