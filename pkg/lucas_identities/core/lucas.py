"""
Lucas 序列 U_k、V_k 与 Horadam 序列 W_k 的符号/数值计算

包括双向递推、负下标公式、快速倍增以及 2x2 矩阵形式。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Tuple, Union

from .algebra import LaurentPoly, RationalFunction, as_rational
from .exceptions import SingularParameterError

logger = logging.getLogger(__name__)

Value = Union[int, Fraction, RationalFunction]

_P = RationalFunction.variable("P")
_Q = RationalFunction.variable("Q")


def _is_zero(value: Value) -> bool:
    if isinstance(value, RationalFunction):
        return value.is_zero()
    return value == 0


def _coerce(value) -> Value:
    if isinstance(value, (RationalFunction, Fraction)):
        return value
    if isinstance(value, LaurentPoly):
        return RationalFunction(value)
    return as_rational(value)


@dataclass(frozen=True)
class SequenceParams:
    """递推 f_{k+2} = P f_{k+1} - Q f_k 的参数"""
    P: Value
    Q: Value

    def __post_init__(self):
        object.__setattr__(self, "P", _coerce(self.P))
        object.__setattr__(self, "Q", _coerce(self.Q))
        if _is_zero(self.P):
            logger.debug("参数 P = 0：含 1/P 系数的恒等式在此处无定义")

    @classmethod
    def symbolic(cls) -> "SequenceParams":
        return cls(_P, _Q)

    @property
    def discriminant(self) -> Value:
        """Δ = P^2 - 4Q"""
        return self.P * self.P - 4 * self.Q

    def require_nonzero_q(self, k: int):
        if k < 0 and _is_zero(self.Q):
            raise SingularParameterError(f"Q = 0 时无法计算负下标 k = {k}")

    def require_binet(self):
        """Binet 公式要求 Δ ≠ 0"""
        if _is_zero(self.discriminant):
            raise SingularParameterError("Δ = P^2 - 4Q = 0，Binet 公式不适用")


def discriminant(params: SequenceParams) -> Value:
    return params.discriminant


@dataclass(frozen=True)
class LucasPair:
    """相邻两项 (U_k, U_{k+1})"""
    k: int
    u_k: Value
    u_k1: Value

    def advance(self, params: SequenceParams) -> "LucasPair":
        return LucasPair(self.k + 1, self.u_k1, params.P * self.u_k1 - params.Q * self.u_k)


@dataclass(frozen=True)
class HoradamParams:
    """W_{k+2} = p0 W_{k+1} + p1 W_k，W_0 = a0，W_1 = a1"""
    a0: Value
    a1: Value
    p0: Value
    p1: Value

    def __post_init__(self):
        for name in ("a0", "a1", "p0", "p1"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))

    @classmethod
    def symbolic(cls) -> "HoradamParams":
        return cls(*(RationalFunction.variable(n) for n in ("a0", "a1", "p0", "p1")))

    def lucas_params(self) -> SequenceParams:
        """W 化归到 U(p0, -p1)"""
        return SequenceParams(self.p0, -self.p1)

    def is_symbolic(self) -> bool:
        return any(isinstance(getattr(self, n), RationalFunction) for n in ("a0", "a1", "p0", "p1"))


# ===== 符号计算 =====

_U_CACHE: List[LaurentPoly] = []
_V_CACHE: List[LaurentPoly] = []


def _fill(cache: List[LaurentPoly], first: int, second, k: int) -> LaurentPoly:
    if not cache:
        cache.extend([LaurentPoly.constant(first), LaurentPoly.coerce(second)])
    P = LaurentPoly.variable("P")
    Q = LaurentPoly.variable("Q")
    while len(cache) <= k:
        cache.append(P * cache[-1] - Q * cache[-2])
    return cache[k]


def lucas_symbolic(kind: str, k: int) -> RationalFunction:
    """
    U_k 或 V_k 作为 Q(P, Q) 的元素

    k >= 0 时为多项式；k < 0 时用 U_{-k} = -U_k/Q^k、V_{-k} = V_k/Q^k。
    """
    kind = kind.upper()
    if kind == "U":
        poly = _fill(_U_CACHE, 0, 1, abs(k))
        sign = -1
    elif kind == "V":
        poly = _fill(_V_CACHE, 2, LaurentPoly.variable("P"), abs(k))
        sign = 1
    else:
        raise ValueError(f"未知的序列类型: {kind}")
    if k >= 0:
        return RationalFunction(poly, _normalized=True)
    return RationalFunction(poly * sign, LaurentPoly.variable("Q", -k))


def sign_flip(kind: str, k: int) -> RationalFunction:
    """以 -P 代替 P 后的 U_k / V_k"""
    return lucas_symbolic(kind, k).subs({"P": -_P})


def specialize(value: RationalFunction, params: SequenceParams) -> Value:
    """把 Q(P, Q) 中的值代入具体参数"""
    if isinstance(params.P, RationalFunction) or isinstance(params.Q, RationalFunction):
        return value.subs({"P": params.P, "Q": params.Q})
    return value.evaluate({"P": params.P, "Q": params.Q})


# ===== 数值计算 =====

def _integral(value: Value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _to_value(value) -> Value:
    return Fraction(value) if isinstance(value, int) else value


def _doubling(P, Q, n: int) -> Tuple[Any, Any]:
    """按 n 的二进制位由高到低，用 U_{2j+1} = U_{j+1}^2 - Q U_j^2、U_{2j} = U_j(2U_{j+1} - P U_j) 倍增"""
    u, u1 = 0, 1
    for bit in bin(n)[2:]:
        u, u1 = u * (2 * u1 - P * u), u1 * u1 - Q * u * u
        if bit == "1":
            u, u1 = u1, P * u1 - Q * u
    return u, u1


def _iterative(P, Q, n: int) -> Tuple[Any, Any]:
    u, u1 = 0, 1
    for _ in range(n):
        u, u1 = u1, P * u1 - Q * u
    return u, u1


def _matrix(P, Q, n: int) -> Tuple[Any, Any]:
    power = Mat2(P, -Q, 1, 0).power(n)
    return power.c, power.a


_METHODS = {"doubling": _doubling, "iterative": _iterative, "matrix": _matrix}
METHODS = tuple(_METHODS)


def lucas_numeric(params: SequenceParams, k: int, method: str = "doubling") -> LucasPair:
    """
    精确计算 (U_k, U_{k+1})

    三种方法结果一致；负下标先对 |k| 计算再用反射公式，只需除以 Q 的幂。
    """
    if method not in _METHODS:
        raise ValueError(f"未知的计算方法: {method}，可选: {', '.join(_METHODS)}")
    params.require_nonzero_q(k)
    P, Q = _integral(params.P), _integral(params.Q)
    n = abs(k)
    u, u1 = _METHODS[method](P, Q, n)
    if k >= 0:
        return LucasPair(k, _to_value(u), _to_value(u1))
    # U_{n-1} = (P U_n - U_{n+1}) / Q
    q = _to_value(Q)
    u_prev = (P * u - u1) / q
    u_k = -_to_value(u) / q ** n
    u_k1 = -_to_value(u_prev) / q ** (n - 1)
    return LucasPair(k, u_k, u_k1)


def v_from_u(pair: LucasPair, params: SequenceParams) -> Value:
    """V_k = 2 U_{k+1} - P U_k"""
    return 2 * pair.u_k1 - params.P * pair.u_k


def lucas_v_numeric(params: SequenceParams, k: int, method: str = "doubling") -> Value:
    return v_from_u(lucas_numeric(params, k, method), params)


# ===== 矩阵 =====

@dataclass(frozen=True)
class Mat2:
    """2x2 矩阵 [[a, b], [c, d]]"""
    a: Any
    b: Any
    c: Any
    d: Any

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inverse(self) -> "Mat2":
        det = self.det()
        if _is_zero(det):
            raise SingularParameterError("矩阵不可逆（行列式为零）")
        if isinstance(det, int):
            det = Fraction(det)
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def power(self, k: int) -> "Mat2":
        base = self.inverse() if k < 0 else self
        result = Mat2.identity()
        k = abs(k)
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def entries(self) -> List[List[Any]]:
        return [[self.a, self.b], [self.c, self.d]]

    def normalized(self) -> "Mat2":
        return Mat2(*(RationalFunction.coerce(x) for x in (self.a, self.b, self.c, self.d)))


BASE_MATRICES: Dict[str, Mat2] = {
    "M": Mat2(_P, -_Q, RationalFunction(1), RationalFunction(0)),
    "R": Mat2(RationalFunction(0), -_Q, RationalFunction(1), _P),
    "A": Mat2(RationalFunction(0), -_Q, RationalFunction(1), -_P),
}


def matrix_power(which: str, k: int) -> Mat2:
    """M^k、R^k 或 A^k，元素属于 Q(P, Q)"""
    if which not in BASE_MATRICES:
        raise ValueError(f"未知的矩阵: {which}")
    return BASE_MATRICES[which].power(k).normalized()


def matrix_closed_form(which: str, k: int) -> Mat2:
    """用 U 的闭式给出矩阵幂"""
    U = lambda j: lucas_symbolic("U", j)
    if which == "M":
        return Mat2(U(k + 1), -_Q * U(k), U(k), -_Q * U(k - 1))
    if which == "R":
        return Mat2(-_Q * U(k - 1), -_Q * U(k), U(k), U(k + 1))
    if which == "A":
        s = 1 if k % 2 else -1
        return Mat2(s * _Q * U(k - 1), -s * _Q * U(k), s * U(k), -s * U(k + 1))
    raise ValueError(f"未知的矩阵: {which}")


# ===== Horadam =====

def _specialize_u(j: int, params: SequenceParams) -> Value:
    return specialize(lucas_symbolic("U", j), params)


def horadam(params: HoradamParams, k: int) -> Value:
    """W_k = a1 U_k(p0, -p1) + a0 p1 U_{k-1}(p0, -p1)"""
    if k == 0:
        return params.a0
    if k == 1:
        return params.a1
    lucas = params.lucas_params()
    if k < 0 and _is_zero(params.p1):
        raise SingularParameterError(f"p1 = 0 时无法计算 W_{k}")
    if params.is_symbolic():
        u_k, u_prev = _specialize_u(k, lucas), _specialize_u(k - 1, lucas)
    else:
        pair = lucas_numeric(lucas, k - 1)
        u_prev, u_k = pair.u_k, pair.u_k1
    return params.a1 * u_k + params.a0 * params.p1 * u_prev


def horadam_symbolic(k: int) -> RationalFunction:
    """W_k 作为 Q(a0, a1, p0, p1) 的元素"""
    return horadam(HoradamParams.symbolic(), k)


def horadam_recurrence(params: HoradamParams, k: int) -> Value:
    """直接递推（交叉校验用）"""
    w, w1 = params.a0, params.a1
    if k >= 0:
        for _ in range(k):
            w, w1 = w1, params.p0 * w1 + params.p1 * w
        return w
    if _is_zero(params.p1):
        raise SingularParameterError(f"p1 = 0 时无法计算 W_{k}")
    for _ in range(-k):
        # W_{j-1} = (W_{j+1} - p0 W_j) / p1
        w, w1 = (w1 - params.p0 * w) / params.p1, w
    return w
