"""
精确代数基础：有理数、稀疏多元 Laurent 多项式与多项式分式域

所有值构造后不可变，且处于规范形式，因此结构相等即数学相等。
多元 gcd 委托给 sympy 的 PolyRing（整数系数上的 cofactors）。
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyRing

from .exceptions import DivisionByZeroError, EvaluationSingularityError, UnsupportedOperationError

logger = logging.getLogger(__name__)

Rational = Fraction
Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]

# 变量的全局顺序：先参数，再 Binet 根，再 Horadam 参数，其余按名称
_VARIABLE_RANK = {name: i for i, name in enumerate(
    ["P", "Q", "alpha", "alphabar", "a0", "a1", "p0", "p1"])}


def variable_key(name: str):
    return (0, _VARIABLE_RANK[name], "") if name in _VARIABLE_RANK else (1, 0, name)


def order_variables(names: Iterable[str]) -> Tuple[str, ...]:
    """按全局顺序排列变量名（去重）"""
    return tuple(sorted(set(names), key=variable_key))


def as_rational(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"无法转换为有理数: {value!r}")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _grlex_key(exponents: Exponents):
    return (sum(exponents), exponents)


class LaurentPoly:
    """
    稀疏多元 Laurent 多项式

    terms 把指数元组（与 variables 对齐）映射到非零有理系数。
    variables 只保留实际出现的变量，并按全局顺序排列，
    因此两个值相等当且仅当 (variables, terms) 相等。
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Optional[Mapping[Exponents, Scalar]] = None):
        variables = tuple(variables)
        cleaned: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            if coeff:
                cleaned[tuple(exps)] = as_rational(coeff)
        self.variables, self.terms = _trim(variables, cleaned)
        self._hash = None

    # ===== 构造 =====

    @classmethod
    def constant(cls, value: Scalar) -> "LaurentPoly":
        return cls((), {(): value})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> "LaurentPoly":
        return cls((name,), {(power,): 1})

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff: Scalar = 1) -> "LaurentPoly":
        names = order_variables(exponents)
        return cls(names, {tuple(exponents[n] for n in names): coeff})

    @classmethod
    def coerce(cls, value) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        return cls.constant(value)

    # ===== 查询 =====

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.variables

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_polynomial(self) -> bool:
        return all(e >= 0 for exps in self.terms for e in exps)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"不是常数: {self}")
        return self.terms.get((), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading_exponents(self) -> Exponents:
        return max(self.terms, key=_grlex_key)

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[self.leading_exponents()]

    def monomials(self) -> Dict[Tuple[Tuple[str, int], ...], Fraction]:
        """以 {((变量, 指数), ...): 系数} 的形式返回各项"""
        return {
            tuple((v, e) for v, e in zip(self.variables, exps) if e): c
            for exps, c in self.terms.items()
        }

    def content(self) -> Fraction:
        """系数的有理容度（符号取首项系数的符号）"""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        value = Fraction(num, den)
        return -value if self.leading_coefficient() < 0 else value

    def primitive(self) -> "LaurentPoly":
        """除去容度，使首项系数为正"""
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    # ===== 运算 =====

    def _lift(self, variables: Tuple[str, ...]) -> Dict[Exponents, Fraction]:
        if variables == self.variables:
            return self.terms
        positions = [variables.index(v) for v in self.variables]
        lifted = {}
        for exps, c in self.terms.items():
            full = [0] * len(variables)
            for pos, e in zip(positions, exps):
                full[pos] = e
            lifted[tuple(full)] = c
        return lifted

    def _common(self, other: "LaurentPoly"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        variables = order_variables(self.variables + other.variables)
        return variables, self._lift(variables), other._lift(variables)

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, int, Fraction)):
            return NotImplemented
        other = LaurentPoly.coerce(other)
        variables, a, b = self._common(other)
        result = dict(a)
        for exps, c in b.items():
            result[exps] = result.get(exps, 0) + c
        return LaurentPoly(variables, result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return self.scale(-1)

    def __sub__(self, other) -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, int, Fraction)):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def scale(self, factor: Scalar) -> "LaurentPoly":
        factor = as_rational(factor)
        return LaurentPoly(self.variables, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        variables, a, b = self._common(other)
        result: Dict[Exponents, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                result[key] = result.get(key, 0) + ca * cb
        return LaurentPoly(variables, result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            if not self.is_monomial():
                raise UnsupportedOperationError(f"非单项式不能取负次幂: ({self})^{exponent}")
            (exps, c), = self.terms.items()
            return LaurentPoly(self.variables, {tuple(e * exponent for e in exps): c ** exponent})
        result = LaurentPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # ===== 求值与代换 =====

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """代入有理数求值；负指数变量取零时抛出 EvaluationSingularityError"""
        values = []
        for v in self.variables:
            if v not in assignment:
                raise KeyError(f"赋值缺少变量: {v}")
            values.append(as_rational(assignment[v]))
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for name, value, e in zip(self.variables, values, exps):
                if e < 0 and value == 0:
                    raise EvaluationSingularityError(name)
                if e:
                    term *= value ** e
            total += term
        return total

    def monomial_denominator(self) -> Dict[str, int]:
        """使多项式变为普通多项式所需乘上的单项式（各变量的最小负指数）"""
        shift = {}
        for i, v in enumerate(self.variables):
            low = min(exps[i] for exps in self.terms)
            if low < 0:
                shift[v] = -low
        return shift

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def _trim(variables: Tuple[str, ...], terms: Dict[Exponents, Fraction]):
    """去掉未出现的变量，并把变量排成全局顺序"""
    if not variables:
        return (), terms
    used = [i for i in range(len(variables)) if any(exps[i] for exps in terms)]
    names = [variables[i] for i in used]
    ordered = order_variables(names)
    if len(used) == len(variables) and tuple(names) == ordered:
        return variables, terms
    positions = [used[names.index(v)] for v in ordered]
    projected = {tuple(exps[p] for p in positions): c for exps, c in terms.items()}
    return ordered, projected


def render_poly(poly: LaurentPoly) -> str:
    """按 grlex 降序渲染，如 P^5 - 4*P^3*Q + 3*P*Q^2"""
    if poly.is_zero():
        return "0"
    pieces = []
    for exps in sorted(poly.terms, key=_grlex_key, reverse=True):
        coeff = poly.terms[exps]
        factors = []
        for v, e in zip(poly.variables, exps):
            if e == 1:
                factors.append(v)
            elif e:
                factors.append(f"{v}^{e}" if e > 0 else f"{v}^({e})")
        sign = "-" if coeff < 0 else "+"
        magnitude = abs(coeff)
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = format_rational(magnitude) + "*" + "*".join(factors)
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


# ===== gcd（委托 sympy） =====

@lru_cache(maxsize=256)
def _integer_ring(variables: Tuple[str, ...]) -> PolyRing:
    return PolyRing(variables, ZZ)


def _to_integer_terms(polys, variables):
    """把一组有理系数多项式同时乘以公分母，得到整数系数项"""
    den = 1
    for p in polys:
        for c in p.terms.values():
            den = lcm(den, c.denominator)
    return [{e: int(c * den) for e, c in p._lift(variables).items()} for p in polys]


def _from_ring(element, variables) -> LaurentPoly:
    return LaurentPoly(variables, {tuple(m): int(c) for m, c in element.items()})


def _cofactors(a: LaurentPoly, b: LaurentPoly):
    """返回 (g, a/g, b/g)，要求两者均为普通多项式"""
    variables = order_variables(a.variables + b.variables)
    if not variables:
        return LaurentPoly.constant(1), a, b
    ring = _integer_ring(variables)
    ia, ib = _to_integer_terms([a, b], variables)
    g, ca, cb = ring.from_dict(ia).cofactors(ring.from_dict(ib))
    return _from_ring(g, variables), _from_ring(ca, variables), _from_ring(cb, variables)


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """
    多项式最大公因式

    结果为本原多项式，grlex 首项系数为正；gcd(0, 0) = 0，gcd(a, 0) 为 a 的本原部分。
    """
    a, b = LaurentPoly.coerce(a), LaurentPoly.coerce(b)
    if not (a.is_polynomial() and b.is_polynomial()):
        raise UnsupportedOperationError("poly_gcd 只接受非负指数多项式")
    if a.is_zero() and b.is_zero():
        return LaurentPoly()
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    g, _, _ = _cofactors(a, b)
    return g.primitive()


def factor_list(poly: LaurentPoly):
    """sympy 因式分解，返回 [(因子, 重数)]，用于报告奇异因子与参数条件"""
    poly = LaurentPoly.coerce(poly)
    if poly.is_constant():
        return []
    variables = poly.variables
    ring = _integer_ring(variables)
    [terms] = _to_integer_terms([poly], variables)
    _, factors = ring.from_dict(terms).factor_list()
    result = [(_from_ring(f, variables).primitive(), k) for f, k in factors]
    return sorted(result, key=lambda item: (item[0].total_degree(), str(item[0])))


# ===== 分式域 =====

class RationalFunction:
    """
    分式域 Q(变量) 的元素

    规范形式：num 与 den 互素且均为普通多项式，den 本原且 grlex 首项系数为正，零为 0/1。
    Laurent 值（如 U_{-3} = -(P^2-Q)/Q^3）也用本类表示，分母为单项式。
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _normalized: bool = False):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(1 if den is None else den)
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def variable(cls, name: str) -> "RationalFunction":
        return cls(LaurentPoly.variable(name), _normalized=True)

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    @property
    def variables(self) -> Tuple[str, ...]:
        return order_variables(self.num.variables + self.den.variables)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def total_degree(self) -> int:
        return self.num.total_degree() + self.den.total_degree()

    def __add__(self, other) -> "RationalFunction":
        if not isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other) -> "RationalFunction":
        if not isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return NotImplemented
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return RationalFunction.coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        if not isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction(0)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZeroError("除以零有理函数")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        if not isinstance(other, (RationalFunction, LaurentPoly, int, Fraction)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        if other.is_zero():
            raise DivisionByZeroError("除以零有理函数")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return RationalFunction.coerce(other) / self

    def __pow__(self, exponent: int) -> "RationalFunction":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalFunction(self.num ** exponent, self.den ** exponent, _normalized=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = RationalFunction.coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        den = self.den.evaluate(assignment)
        if den == 0:
            raise EvaluationSingularityError(_vanishing_factor(self.den, assignment))
        return self.num.evaluate(assignment) / den

    def subs(self, mapping: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        """把变量替换为有理函数（未出现在 mapping 中的变量保持不变）"""
        return substitute_poly(self.num, mapping) / substitute_poly(self.den, mapping)

    def __str__(self) -> str:
        return render_ratfunc(self)

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _normalize(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise DivisionByZeroError("分母为零有理函数")
    if num.is_zero():
        return LaurentPoly(), LaurentPoly.constant(1)
    # 清除负指数：分子分母同乘一个单项式
    shift = num.monomial_denominator()
    for v, e in den.monomial_denominator().items():
        shift[v] = max(shift.get(v, 0), e)
    if shift:
        lift = LaurentPoly.monomial(shift)
        num, den = num * lift, den * lift
    if den.is_constant():
        c = den.constant_value()
        return num.scale(1 / c), LaurentPoly.constant(1)
    if den.is_monomial():
        num, den = _cancel_monomial(num, den)
    elif num.is_monomial():
        den, num = _cancel_monomial(den, num)
    else:
        _, num, den = _cofactors(num, den)
    c = den.content()
    return num.scale(1 / c), den.scale(1 / c)


def _cancel_monomial(poly: LaurentPoly, mono: LaurentPoly):
    """poly 与单项式 mono 的公因子就是各变量最小指数的单项式"""
    (m_exps, _), = mono.terms.items()
    common = {}
    for v, e in zip(mono.variables, m_exps):
        if v in poly.variables:
            i = poly.variables.index(v)
            low = min(min(exps[i] for exps in poly.terms), e)
            if low > 0:
                common[v] = -low
    if not common:
        return poly, mono
    shift = LaurentPoly.monomial(common)
    return poly * shift, mono * shift


def _vanishing_factor(den: LaurentPoly, assignment) -> str:
    for factor, _ in factor_list(den):
        try:
            if factor.evaluate(assignment) == 0:
                return str(factor)
        except KeyError:
            continue
    return str(den)


def substitute_poly(poly: LaurentPoly, mapping: Mapping[str, RationalFunction]) -> RationalFunction:
    powers: Dict[Tuple[str, int], RationalFunction] = {}
    total = RationalFunction(0)
    for exps, coeff in poly.terms.items():
        term = RationalFunction(coeff)
        for v, e in zip(poly.variables, exps):
            if not e:
                continue
            key = (v, e)
            if key not in powers:
                base = RationalFunction.coerce(mapping[v]) if v in mapping else RationalFunction.variable(v)
                powers[key] = base ** e
            term = term * powers[key]
        total = total + term
    return total


def render_ratfunc(value: RationalFunction) -> str:
    """规范文本：分母为 1 时只输出分子，否则输出 (num)/(den)"""
    num = render_poly(value.num)
    if value.den == 1:
        return num
    den = render_poly(value.den)
    if len(value.num.terms) > 1:
        num = f"({num})"
    if len(value.den.terms) > 1 or (value.den.is_monomial() and value.den.leading_coefficient() != 1):
        den = f"({den})"
    elif "*" in den:
        den = f"({den})"
    return f"{num}/{den}"


def evaluate(value, assignment: Mapping[str, Scalar]) -> Fraction:
    """对 LaurentPoly / RationalFunction / 有理数求值"""
    if isinstance(value, (int, Fraction)):
        return as_rational(value)
    return value.evaluate(assignment)


def symbols(*names: str) -> Tuple[RationalFunction, ...]:
    return tuple(RationalFunction.variable(n) for n in names)


def poly_arith(op: str, a, b=None, exponent: Optional[int] = None) -> LaurentPoly:
    """按名称分派多项式运算：add / sub / mul / pow"""
    a = LaurentPoly.coerce(a)
    if op == "pow":
        return a ** exponent
    b = LaurentPoly.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise UnsupportedOperationError(f"未知的多项式运算: {op}")


def ratfunc_arith(op: str, a, b) -> RationalFunction:
    """按名称分派分式运算：add / sub / mul / div"""
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise UnsupportedOperationError(f"未知的分式运算: {op}")
