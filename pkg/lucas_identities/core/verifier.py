"""
Binet 展开验证器

每个下标变量 k_i 对应一对独立的 Laurent 不定元 T_i = α^{k_i}、S_i = ᾱ^{k_i}，
系数属于 Q(α, ᾱ)（另含 Horadam 参数）。模板成立当且仅当展开式为零。

参数特化为有理数 P0、Q0 时，系数在 Q[α]/(α² - P0·α + Q0) 中运算，ᾱ = P0 - α。
"""

import asyncio
import logging
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import LaurentPoly, RationalFunction, as_rational, format_rational, render_ratfunc
from .catalog import catalog_instance
from .exceptions import (
    AlgebraError, DivisionByZeroError, EvaluationSingularityError, PreconditionError,
    SingularParameterError, UnsupportedOperationError,
)
from .identity import (
    HORADAM_NAMES, ZERO_INDEX, IdentityTemplate, IndexExpr, SeqFactor, Term, TermEvaluator, TermSum,
)
from .lucas import SequenceParams, lucas_numeric

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

_ALPHA = RationalFunction.variable("alpha")
_ALPHABAR = RationalFunction.variable("alphabar")


# ===== BinetPoly =====

class BinetPoly:
    """
    Σ c·ΠT_i^{t_i}·ΠS_i^{s_i}

    键为 (t_1, ..., t_n, s_1, ..., s_n)，与 index_vars 对齐；不存储零系数。
    """

    __slots__ = ("index_vars", "terms")

    def __init__(self, index_vars: Sequence[str], terms: Optional[Mapping[Monomial, RationalFunction]] = None):
        self.index_vars = tuple(index_vars)
        self.terms: Dict[Monomial, RationalFunction] = {
            m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def constant(cls, index_vars: Sequence[str], value) -> "BinetPoly":
        return cls(index_vars, {(0,) * (2 * len(index_vars)): RationalFunction.coerce(value)})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "BinetPoly"):
        if self.index_vars != other.index_vars:
            raise AlgebraError(f"下标变量不一致: {self.index_vars} != {other.index_vars}")

    def __add__(self, other: "BinetPoly") -> "BinetPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return BinetPoly(self.index_vars, terms)

    def __neg__(self) -> "BinetPoly":
        return BinetPoly(self.index_vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "BinetPoly") -> "BinetPoly":
        return self + (-other)

    def __mul__(self, other: "BinetPoly") -> "BinetPoly":
        self._check(other)
        terms: Dict[Monomial, RationalFunction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                terms[m] = terms[m] + c if m in terms else c
        return BinetPoly(self.index_vars, terms)

    def scale(self, value: RationalFunction) -> "BinetPoly":
        return BinetPoly(self.index_vars, {m: c * value for m, c in self.terms.items()})

    def map_coefficients(self, fn) -> "BinetPoly":
        return BinetPoly(self.index_vars, {m: fn(c) for m, c in self.terms.items()})

    def monomials(self) -> List[Monomial]:
        return sorted(self.terms)

    def witness(self) -> Optional[Tuple[Monomial, RationalFunction]]:
        """字典序最小的非零单项式"""
        if not self.terms:
            return None
        m = min(self.terms)
        return m, self.terms[m]

    def monomial_text(self, m: Monomial) -> str:
        n = len(self.index_vars)
        parts = []
        for prefix, exps in (("T", m[:n]), ("S", m[n:])):
            for v, e in zip(self.index_vars, exps):
                if e == 1:
                    parts.append(f"{prefix}_{v}")
                elif e:
                    parts.append(f"{prefix}_{v}^{e}" if e > 0 else f"{prefix}_{v}^({e})")
        return "*".join(parts) or "1"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinetPoly):
            return NotImplemented
        return self.index_vars == other.index_vars and self.terms == other.terms

    def __repr__(self) -> str:
        body = " + ".join(f"({render_ratfunc(c)})*{self.monomial_text(m)}" for m, c in sorted(self.terms.items()))
        return f"BinetPoly({body or '0'})"


# ===== 特征根模型 =====

class _RootModel:
    """根据已特化的参数决定 α、ᾱ 的表示"""

    def __init__(self, params: Mapping[str, Fraction]):
        self.P0 = params.get("P")
        self.Q0 = params.get("Q")
        self.quadratic = self.P0 is not None and self.Q0 is not None
        if self.quadratic:
            if self.Q0 == 0:
                raise SingularParameterError("特化参数 Q = 0，负下标无定义")
            self.lucas = SequenceParams(self.P0, self.Q0)
            self.lucas.require_binet()
            self.discriminant = self.lucas.discriminant
            self.alphabar = RationalFunction(self.P0) - _ALPHA
        elif self.P0 is not None:
            self.alphabar = RationalFunction(self.P0) - _ALPHA
        elif self.Q0 is not None:
            if self.Q0 == 0:
                raise SingularParameterError("特化参数 Q = 0，负下标无定义")
            self.alphabar = RationalFunction(self.Q0) / _ALPHA
        else:
            self.alphabar = _ALPHABAR
        self.P = RationalFunction(self.P0) if self.P0 is not None else _ALPHA + self.alphabar
        self.Q = RationalFunction(self.Q0) if self.Q0 is not None else _ALPHA * self.alphabar
        self.delta = _ALPHA - self.alphabar
        # Q = ±1 时 T_i·S_i = Q^{k_i} 满足 (T_i·S_i)^2 = 1（Q = 1 时 T_i·S_i = 1）
        self.unit_q = self.Q0 if self.Q0 in (1, -1) else None

    def reduce_monomials(self, poly: "BinetPoly") -> "BinetPoly":
        """按 Q = ±1 的关系把每对 (T_i, S_i) 的公共次数约去"""
        if self.unit_q is None or poly.is_zero():
            return poly
        n = len(poly.index_vars)
        period = 1 if self.unit_q == 1 else 2
        terms: Dict[Monomial, RationalFunction] = {}
        for m, c in poly.terms.items():
            t, s = list(m[:n]), list(m[n:])
            for i in range(n):
                shift = min(t[i], s[i]) // period * period
                t[i] -= shift
                s[i] -= shift
            key = tuple(t) + tuple(s)
            terms[key] = terms[key] + c if key in terms else c
        return BinetPoly(poly.index_vars, terms)

    def coefficient(self, c: RationalFunction) -> RationalFunction:
        names = set(c.variables)
        mapping = {}
        if "P" in names:
            mapping["P"] = self.P
        if "Q" in names:
            mapping["Q"] = self.Q
        return self.reduce(c.subs(mapping) if mapping else c)

    def alpha_power(self, d: int) -> RationalFunction:
        if self.quadratic:
            return self._quadratic_power(d, conjugate=False)
        return _ALPHA ** d

    def alphabar_power(self, d: int) -> RationalFunction:
        if self.quadratic:
            return self._quadratic_power(d, conjugate=True)
        return self.alphabar ** d

    def _quadratic_power(self, d: int, conjugate: bool) -> RationalFunction:
        # α^d = U_d·α - Q·U_{d-1}
        pair = lucas_numeric(self.lucas, d - 1)
        root = self.alphabar if conjugate else _ALPHA
        return root * pair.u_k1 - self.Q0 * pair.u_k

    def reduce(self, value: RationalFunction) -> RationalFunction:
        """商环 Q[α]/(α² - P0·α + Q0) 中的规约"""
        if not self.quadratic or "alpha" not in value.num.variables:
            return value
        if "alpha" in value.den.variables:
            raise AlgebraError(f"特化模式下分母不应含 α: {value}")
        num = value.num
        i = num.variables.index("alpha")
        total = LaurentPoly()
        for exps, coeff in num.terms.items():
            e = exps[i]
            rest = LaurentPoly(num.variables, {exps[:i] + (0,) + exps[i + 1:]: coeff})
            if e == 0:
                total = total + rest
                continue
            if e == 1:
                total = total + rest * LaurentPoly.variable("alpha")
                continue
            pair = lucas_numeric(self.lucas, e - 1)
            linear = LaurentPoly.variable("alpha") * pair.u_k1 - LaurentPoly.constant(self.Q0 * pair.u_k)
            total = total + rest * linear
        return RationalFunction(total, value.den)

    def delta_inverse_power(self, u: int) -> RationalFunction:
        if u == 0:
            return RationalFunction(1)
        if self.quadratic:
            # (α - ᾱ)^2 = Δ，故 (α - ᾱ)^{-1} = (α - ᾱ)/Δ
            inverse = self.reduce(self.delta / self.discriminant)
            result = RationalFunction(1)
            for _ in range(u):
                result = self.reduce(result * inverse)
            return result
        return self.delta ** (-u)

    def delta_power(self, u: int) -> RationalFunction:
        result = RationalFunction(1)
        for _ in range(u):
            result = self.reduce(result * self.delta)
        return result


# ===== 模板预处理 =====

def _is_variable(value, name: str) -> bool:
    return isinstance(value, RationalFunction) and value == RationalFunction.variable(name)


def _constant(value) -> Optional[Fraction]:
    if isinstance(value, RationalFunction):
        return value.constant_value() if value.is_constant() else None
    return as_rational(value)


def rewrite_horadam(template: IdentityTemplate) -> IdentityTemplate:
    """
    W_e 改写为 a1·U_e + a0·p1·U_{e-1}，U 的参数为 (p0, -p1)

    p0、p1 为有理数时记入模板参数；为符号 p0、p1 时改名为 P、-Q；
    为 (P, -Q) 时直接沿用。
    """
    if not template.uses_kind("W"):
        return template
    h = template.horadam
    if h is None:
        raise PreconditionError("W 因子需要 Horadam 参数声明（@params）")
    p0, p1 = _constant(h.p0), _constant(h.p1)
    params = dict(template.params)
    rename: Dict[str, RationalFunction] = {}
    mixes_lucas = template.uses_kind("U") or template.uses_kind("V")
    if p0 is not None and p1 is not None:
        target = {"P": p0, "Q": -p1}
        for k, v in target.items():
            if k in params and params[k] != v:
                raise UnsupportedOperationError(f"W 的递推参数与模板参数 {k} = {params[k]} 冲突")
        if mixes_lucas and not all(k in params for k in target):
            raise UnsupportedOperationError("W 的数值递推参数不能与符号 P、Q 的 U/V 因子混用")
        params.update(target)
    elif _is_variable(h.p0, "p0") and _is_variable(h.p1, "p1"):
        if mixes_lucas:
            raise UnsupportedOperationError("符号 p0、p1 的 W 因子不能与 U/V 因子混用")
        rename = {"p0": RationalFunction.variable("P"), "p1": -RationalFunction.variable("Q")}
    elif _is_variable(h.p0, "P") and RationalFunction.coerce(h.p1) == -RationalFunction.variable("Q"):
        pass
    else:
        raise UnsupportedOperationError("W 的递推参数必须是有理数、符号 p0/p1，或 (P, -Q)")

    a1 = RationalFunction.coerce(h.a1)
    a0p1 = RationalFunction.coerce(h.a0) * RationalFunction.coerce(h.p1)
    if rename:
        a1, a0p1 = a1.subs(rename), a0p1.subs(rename)
    result = TermSum()
    for term in template.terms:
        coefficient = term.coefficient.subs(rename) if rename else term.coefficient
        product = TermSum([Term(coefficient, term.unknown, term.q_exponent, side=term.side)])
        for f in term.factors:
            if f.kind != "W":
                product = product * TermSum.factor(f)
                continue
            expansion = (TermSum.constant(a1) * TermSum.factor(SeqFactor("U", f.index))
                         + TermSum.constant(a0p1) * TermSum.factor(SeqFactor("U", f.index - 1)))
            product = product * expansion ** f.exponent
        result = result + product.with_side(term.side)
    return IdentityTemplate(result.terms, template.index_vars, template.name, params, None)


def clear_denominators(template: IdentityTemplate) -> IdentityTemplate:
    """整体乘以所有分母序列因子（取最大次数），得到只含非负指数的等价模板"""
    if not template.has_symbolic_denominators():
        return template
    denominators: Dict[Tuple[str, IndexExpr], int] = {}
    for t in template.terms:
        for f in t.factors:
            if f.exponent < 0:
                key = (f.kind, f.index)
                denominators[key] = max(denominators.get(key, 0), -f.exponent)
    terms = []
    for t in template.terms:
        exps = {(f.kind, f.index): f.exponent for f in t.factors}
        for key, e in denominators.items():
            exps[key] = exps.get(key, 0) + e
        factors = tuple(sorted((SeqFactor(kind, index, e) for (kind, index), e in exps.items() if e),
                               key=SeqFactor.sort_key))
        terms.append(replace(t, factors=factors))
    logger.debug("清除分母因子: %s", ", ".join(f"{k}[{i}]" for k, i in denominators))
    return template.with_terms(terms)


def _prepare(template: IdentityTemplate) -> IdentityTemplate:
    if not template.is_fully_known():
        raise PreconditionError(f"模板含未知系数 {', '.join(template.unknowns())}，不能直接验证")
    return clear_denominators(rewrite_horadam(template))


# ===== 展开 =====

def _factor_poly(model: _RootModel, index_vars: Tuple[str, ...], kind: str, index: IndexExpr) -> BinetPoly:
    n = len(index_vars)
    a = [0] * n
    for v, c in index.coeffs:
        a[index_vars.index(v)] = c
    t_key = tuple(a) + (0,) * n
    s_key = (0,) * n + tuple(a)
    d = index.constant
    t_coeff = model.alpha_power(d)
    s_coeff = model.alphabar_power(d)
    if kind == "U":
        s_coeff = -s_coeff
    elif kind != "V":
        raise UnsupportedOperationError(f"无法展开的序列类型: {kind}")
    return BinetPoly(index_vars, {t_key: t_coeff}) + BinetPoly(index_vars, {s_key: s_coeff})


def _expand_term(model: _RootModel, index_vars: Tuple[str, ...], term: Term) -> Tuple[BinetPoly, int]:
    """返回 (乘以 (α-ᾱ)^u 后的展开式, u)，u 为 U 因子的总次数"""
    n = len(index_vars)
    result = BinetPoly.constant(index_vars, 1)
    if term.q_exponent != ZERO_INDEX:
        a = [0] * n
        for v, c in term.q_exponent.coeffs:
            a[index_vars.index(v)] = c
        result = BinetPoly(index_vars, {tuple(a) + tuple(a): RationalFunction(1)})
    u = 0
    for f in term.factors:
        if f.exponent < 0:
            raise UnsupportedOperationError(f"展开前必须清除分母因子: {f}")
        base = _factor_poly(model, index_vars, f.kind, f.index)
        for _ in range(f.exponent):
            result = (result * base).map_coefficients(model.reduce)
        if f.kind == "U":
            u += f.exponent
    return result, u


def _expand_scaled(template: IdentityTemplate) -> Tuple[BinetPoly, int, _RootModel]:
    """返回 (整体乘以 (α-ᾱ)^umax 的展开式, umax, 模型)"""
    model = _RootModel(template.params)
    index_vars = template.index_vars
    expansions = [(t, *_expand_term(model, index_vars, t)) for t in template.terms]
    umax = max((u for _, _, u in expansions), default=0)
    total = BinetPoly(index_vars)
    for term, poly, u in expansions:
        scale = model.reduce(model.coefficient(term.coefficient) * model.delta_power(umax - u))
        total = total + poly.scale(scale).map_coefficients(model.reduce)
    total = model.reduce_monomials(total)
    return total, umax, model


def binet_expand(template: IdentityTemplate) -> BinetPoly:
    """Binet 展开为规范 BinetPoly；零多项式当且仅当模板对一般参数恒成立"""
    prepared = _prepare(template)
    total, umax, model = _expand_scaled(prepared)
    if total.is_zero() or umax == 0:
        return total
    inverse = model.delta_inverse_power(umax)
    return total.map_coefficients(lambda c: model.reduce(c * inverse))


# ===== 数值检验 =====

@dataclass(frozen=True)
class Counterexample:
    """使模板两侧不等的具体参数与下标"""
    params: Dict[str, Fraction]
    indices: Dict[str, int]
    lhs: Fraction
    rhs: Fraction

    @property
    def value(self) -> Fraction:
        return self.lhs - self.rhs

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {k: format_rational(v) for k, v in sorted(self.params.items())}
        data["indices"] = dict(sorted(self.indices.items()))
        data["lhs"] = format_rational(self.lhs)
        data["rhs"] = format_rational(self.rhs)
        data["value"] = format_rational(self.value)
        return data


def _random_rational(rng: random.Random, bound: int) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def _sampled_names(template: IdentityTemplate) -> List[str]:
    names = [n for n in ("P", "Q") if n not in template.params]
    used = set()
    for t in template.terms:
        used.update(t.coefficient.variables)
    if template.horadam is not None:
        for n in HORADAM_NAMES:
            value = getattr(template.horadam, n)
            if isinstance(value, RationalFunction):
                used.update(value.variables)
    names.extend(n for n in HORADAM_NAMES if n in used)
    return names


def numeric_check(template: IdentityTemplate, trials: int = 200, seed: int = 0, sample_range: int = 9,
                  index_range: int = 6) -> Optional[Counterexample]:
    """
    随机有理参数与随机下标上的精确求值

    参数分子分母取自 [-sample_range, sample_range]，要求 Q != 0、Δ != 0，
    系数或序列值奇异的样本跳过；返回第一个两侧不等的样本，找不到时返回 None。
    """
    if not template.is_fully_known():
        raise PreconditionError(f"模板含未知系数 {', '.join(template.unknowns())}，不能数值检验")
    if template.is_zero():
        return None
    rng = random.Random(seed)
    names = _sampled_names(template)
    evaluated = attempts = 0
    while evaluated < trials and attempts < trials * 20:
        attempts += 1
        values = {name: _random_rational(rng, sample_range) for name in names}
        P = values.get("P", template.params.get("P"))
        Q = values.get("Q", template.params.get("Q"))
        if Q == 0 or P * P - 4 * Q == 0:
            continue
        indices = {v: rng.randint(-index_range, index_range) for v in template.index_vars}
        try:
            lhs, rhs = evaluate_sides(template, values, indices)
        except (EvaluationSingularityError, SingularParameterError, DivisionByZeroError, ZeroDivisionError):
            continue
        evaluated += 1
        if lhs != rhs:
            params = dict(template.params)
            params.update(values)
            logger.debug("数值反例: %s %s", params, indices)
            return Counterexample(params, indices, lhs, rhs)
    if evaluated < trials:
        logger.warning("数值检验只完成 %d/%d 次有效采样", evaluated, trials)
    return None


def evaluate_sides(template: IdentityTemplate, values: Mapping[str, Fraction],
                   indices: Mapping[str, int]) -> Tuple[Fraction, Fraction]:
    """返回 (左侧值, 右侧值)；右侧存储为负，此处还原"""
    evaluator = TermEvaluator(template, values)
    lhs, rhs = Fraction(0), Fraction(0)
    for term in template.terms:
        value = evaluator.term_value(term, indices)
        if term.side == 0:
            lhs += value
        else:
            rhs -= value
    return lhs, rhs


# ===== 判定 =====

class VerdictStatus(str, Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"


@dataclass
class Verdict:
    """验证结论；Refuted 时必带见证单项式"""
    status: VerdictStatus
    name: Optional[str] = None
    witness: Optional[Tuple[str, RationalFunction]] = None
    counterexample: Optional[Counterexample] = None
    guards: List[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status is VerdictStatus.VERIFIED

    def __post_init__(self):
        if self.status is VerdictStatus.REFUTED and self.witness is None:
            raise ValueError("Refuted 结论必须带见证单项式")


def verify(template: IdentityTemplate, trials: int = 100, seed: int = 0, sample_range: int = 9,
           index_range: int = 6) -> Verdict:
    """
    符号验证：展开式为零即 Verified

    Refuted 时给出字典序最小的非零单项式，并尝试用 numeric_check 找具体反例。
    """
    prepared = _prepare(template)
    total, umax, model = _expand_scaled(prepared)
    guards = template.guards()
    if total.is_zero():
        logger.info("恒等式 %s 验证通过", template.name or "")
        return Verdict(VerdictStatus.VERIFIED, template.name, guards=guards)
    monomial, coefficient = total.witness()
    if umax:
        coefficient = model.reduce(coefficient * model.delta_inverse_power(umax))
    witness = (total.monomial_text(monomial), coefficient)
    counterexample = numeric_check(template, trials=trials, seed=seed, sample_range=sample_range,
                                   index_range=index_range)
    logger.info("恒等式 %s 不成立，见证单项式 %s", template.name or "", witness[0])
    return Verdict(VerdictStatus.REFUTED, template.name, witness, counterexample, guards)


async def verify_all_async(templates: Sequence[IdentityTemplate], workers: int = 1, trials: int = 100,
                           seed: int = 0) -> List[Verdict]:
    """并发验证多个模板，结果按输入顺序返回"""
    semaphore = asyncio.Semaphore(max(1, workers))

    async def _one(template: IdentityTemplate) -> Verdict:
        async with semaphore:
            return await asyncio.to_thread(verify, template, trials, seed)

    return list(await asyncio.gather(*(_one(t) for t in templates)))


def verify_all(names: Iterable[str], workers: int = 1, trials: int = 100, seed: int = 0) -> List[Verdict]:
    """按名称验证目录恒等式（含默认下标实例），结果按名称顺序排列"""
    ordered = list(names)
    templates = [catalog_instance(name) for name in ordered]
    return asyncio.run(verify_all_async(templates, workers, trials, seed))


def verdict_to_dict(verdict: Verdict) -> Dict[str, Any]:
    data: Dict[str, Any] = {"name": verdict.name, "status": verdict.status.value, "guards": list(verdict.guards)}
    if verdict.witness is not None:
        monomial, coefficient = verdict.witness
        data["witness"] = {"monomial": monomial, "coefficient": render_ratfunc(coefficient)}
    if verdict.counterexample is not None:
        data["counterexample"] = verdict.counterexample.to_dict()
    return data
