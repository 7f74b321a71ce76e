"""
待定系数法：在小下标处取样，得到 Q(P, Q) 上的精确线性方程组

求解后把每个候选解代回模板并交给验证器；方程组只检验了有限个下标，
所以候选解可能被 Binet 展开否定，这种结果同样会被报告。
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import RationalFunction, factor_list, format_rational, render_poly, render_ratfunc
from .exceptions import (
    DivisionByZeroError, EvaluationSingularityError, LucasIdentityError, PreconditionError,
    SamplingFailureError, SingularParameterError, SingularSampleError,
)
from .identity import (
    IdentityTemplate, IndexExpr, SeqFactor, Term, TermEvaluator, bind_unknowns, substitute,
)
from .lucas import lucas_symbolic
from .verifier import Verdict, verify

logger = logging.getLogger(__name__)

Vector = List[RationalFunction]

_ZERO = RationalFunction(0)
_ONE = RationalFunction(1)


@dataclass
class AnsatzSystem:
    """行对应样本（下标赋值），列对应未知量"""
    matrix: List[Vector]
    rhs: Vector
    unknowns: List[str]
    samples: List[Dict[str, int]]

    @property
    def is_square(self) -> bool:
        return len(self.matrix) == len(self.unknowns)

    @property
    def is_homogeneous(self) -> bool:
        return all(v.is_zero() for v in self.rhs)


@dataclass
class SolutionReport:
    rank: int
    nullity: int
    determinant: Optional[RationalFunction] = None
    particular: Optional[Vector] = None
    nullspace_basis: List[Vector] = field(default_factory=list)
    parameter_conditions: List[str] = field(default_factory=list)
    consistent: bool = True


@dataclass
class DiscoveryResult:
    template: IdentityTemplate
    system: AnsatzSystem
    report: SolutionReport
    solutions: List[IdentityTemplate] = field(default_factory=list)
    vectors: List[Vector] = field(default_factory=list)
    verdicts: List[Verdict] = field(default_factory=list)

    @property
    def verified(self) -> List[IdentityTemplate]:
        return [s for s, v in zip(self.solutions, self.verdicts) if v.verified]


# ===== 取样 =====

def _power_ansatz_degree(template: IdentityTemplate) -> Optional[int]:
    """模板形如 X[mk] = Σ a_i U[k]^i U[k+1]^{m-i} 时返回 m"""
    known = [t for t in template.terms if t.is_known()]
    if len(known) != 1 or len(known[0].factors) != 1 or template.index_vars != ("k",):
        return None
    head = known[0].factors[0]
    if head.kind not in ("U", "V") or head.exponent != 1 or head.index.constant or len(head.index.coeffs) != 1:
        return None
    m = head.index.coeffs[0][1]
    if m < 1:
        return None
    allowed = {IndexExpr.var("k"), IndexExpr.var("k") + 1}
    for t in template.terms:
        if t.is_known():
            continue
        if any(f.kind != "U" or f.index not in allowed for f in t.factors):
            return None
        if sum(f.exponent for f in t.factors) != m:
            return None
    return m


def _candidates(start: int, limit: int) -> List[int]:
    upward = list(range(start, limit + 1))
    downward = list(range(start - 1, -limit - 1, -1))
    return upward + downward


def extra_index_bindings(template: IdentityTemplate) -> Dict[str, int]:
    """主下标以外的下标变量依次绑定为 1, 2, 3, ..."""
    primary = template.primary_index()
    extras = [v for v in template.index_vars if v != primary]
    return {v: i for i, v in enumerate(extras, start=1)}


def default_samples(template: IdentityTemplate, count: Optional[int] = None) -> List[Dict[str, int]]:
    """
    主下标取接近 0 的整数；遇到奇异样本跳过并顺延

    幂表示形状的模板（m 次）从 -⌊(m-1)/2⌋ 开始，否则从 -⌊(n-1)/2⌋ 开始，
    n 为未知量个数；|k| 不超过 n + 4。
    """
    n = len(template.unknowns())
    need = count or max(n, 1)
    primary = template.primary_index()
    extras = extra_index_bindings(template)
    if primary is None:
        return [dict(extras)]
    m = _power_ansatz_degree(template)
    start = -((m - 1) // 2) if m is not None else -((n - 1) // 2)
    limit = n + 4
    evaluator = TermEvaluator(template)
    samples = []
    for k in _candidates(start, limit):
        assignment = dict(extras)
        assignment[primary] = k
        try:
            evaluator.evaluate(assignment)
        except (EvaluationSingularityError, SingularParameterError, DivisionByZeroError) as exc:
            logger.debug("跳过奇异样本 %s: %s", assignment, exc)
            continue
        samples.append(assignment)
        if len(samples) == need:
            return samples
    raise SamplingFailureError(f"在 |{primary}| <= {limit} 内只找到 {len(samples)} 个非奇异样本，需要 {need} 个")


# ===== 方程组 =====

def build_system(template: IdentityTemplate, samples: Sequence[Mapping[str, int]]) -> AnsatzSystem:
    unknowns = list(template.unknowns())
    if not unknowns:
        raise PreconditionError("模板不含未知系数，无需建立方程组")
    evaluator = TermEvaluator(template)
    matrix, rhs = [], []
    for sample in samples:
        try:
            totals = evaluator.evaluate(sample)
        except EvaluationSingularityError as exc:
            raise SingularSampleError(dict(sample), exc.factor) from exc
        except (SingularParameterError, DivisionByZeroError) as exc:
            raise SingularSampleError(dict(sample), str(exc)) from exc
        matrix.append([RationalFunction.coerce(totals.get(u, 0)) for u in unknowns])
        rhs.append(-RationalFunction.coerce(totals.get(None, 0)))
    logger.debug("建立 %dx%d 方程组", len(matrix), len(unknowns))
    return AnsatzSystem(matrix, rhs, unknowns, [dict(s) for s in samples])


def _pivot_row(rows: List[Vector], start: int, col: int) -> Optional[int]:
    best = None
    for r in range(start, len(rows)):
        entry = rows[r][col]
        if entry.is_zero():
            continue
        key = (entry.total_degree(), r)
        if best is None or key < best[0]:
            best = (key, r)
    return None if best is None else best[1]


def solve(system: AnsatzSystem) -> SolutionReport:
    """
    Q(P, Q) 上的 Gauss-Jordan 消元

    主元取列中总次数最小的非零元；方阵时行列式为主元之积乘以行交换的符号。
    """
    cols = len(system.unknowns)
    rows = [list(r) + [b] for r, b in zip(system.matrix, system.rhs)]
    sign = 1
    determinant = _ONE
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        p = _pivot_row(rows, r, col)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        pivot = rows[r][col]
        determinant = determinant * pivot
        rows[r] = [x / pivot for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    rank = len(pivots)
    nullity = cols - rank
    consistent = not any(not row[cols].is_zero() and all(x.is_zero() for x in row[:cols]) for row in rows)

    report = SolutionReport(rank=rank, nullity=nullity, consistent=consistent)
    if system.is_square:
        report.determinant = determinant * sign if rank == cols else _ZERO
        if not report.determinant.is_zero():
            report.parameter_conditions = [render_poly(f) for f, _ in factor_list(report.determinant.num)]

    free = [c for c in range(cols) if c not in pivots]
    for f in free:
        vector = [_ZERO] * cols
        vector[f] = _ONE
        for i, pc in enumerate(pivots):
            vector[pc] = -rows[i][f]
        report.nullspace_basis.append(vector)
    if consistent and not system.is_homogeneous:
        particular = [_ZERO] * cols
        for i, pc in enumerate(pivots):
            particular[pc] = rows[i][cols]
        report.particular = particular
    logger.debug("消元完成: rank=%d nullity=%d", rank, nullity)
    return report


def determinant_cofactor(matrix: Sequence[Sequence[RationalFunction]]) -> RationalFunction:
    """按第一行做余子式展开（小矩阵的对照实现）"""
    n = len(matrix)
    if n == 0:
        return _ONE
    if n == 1:
        return RationalFunction.coerce(matrix[0][0])
    total = _ZERO
    for j in range(n):
        entry = RationalFunction.coerce(matrix[0][j])
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in matrix[1:])]
        term = entry * determinant_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def factored_text(value: RationalFunction) -> str:
    """因式分解形式，如 -2*P^4*(P^2 - 2*Q)*(P^2 - Q)*(P^2 + Q)/Q"""
    if value.is_zero():
        return "0"

    def _side(poly):
        factors = factor_list(poly)
        constant = poly.leading_coefficient()
        for f, k in factors:
            constant /= f.leading_coefficient() ** k
        parts = []
        for f, k in factors:
            body = render_poly(f)
            if len(f.terms) > 1:
                body = f"({body})"
            parts.append(body if k == 1 else f"{body}^{k}")
        return constant, parts

    num_c, num_parts = _side(value.num)
    den_c, den_parts = _side(value.den)
    constant = num_c / den_c
    text = "*".join(([format_rational(constant)] if constant not in (1, -1) or not num_parts else [])
                    + num_parts)
    if constant == -1 and num_parts:
        text = "-" + text
    if den_parts:
        den = "*".join(den_parts)
        text += f"/({den})" if len(den_parts) > 1 else f"/{den}"
    return text


# ===== 发现 =====

def _normalize_vector(vector: Vector, unknowns: List[str], normalize: Mapping[str, Any]) -> Vector:
    if len(normalize) > 1:
        raise PreconditionError(f"只能指定一个归一化变量: {', '.join(normalize)}")
    for name, value in normalize.items():
        if name not in unknowns:
            raise PreconditionError(f"归一化变量 {name} 不是未知量，可用: {', '.join(unknowns)}")
        i = unknowns.index(name)
        if vector[i].is_zero():
            raise PreconditionError(f"零空间向量中 {name} 的分量为零，不能按 {name} 归一化")
        target = RationalFunction.coerce(value)
        if target.is_zero():
            raise PreconditionError(f"归一化值不能为零: {name}")
        scale = target / vector[i]
        return [x * scale for x in vector]
    for i in range(len(vector) - 1, -1, -1):
        if not vector[i].is_zero():
            scale = -_ONE / vector[i]
            return [x * scale for x in vector]
    return vector


def _candidate_vectors(report: SolutionReport, unknowns: List[str],
                       normalize: Mapping[str, Any]) -> List[Vector]:
    if not report.consistent:
        return []
    if report.particular is not None:
        candidates = [report.particular]
        for basis in report.nullspace_basis:
            shifted = [a + b for a, b in zip(report.particular, basis)]
            candidates.append(shifted)
        return candidates
    return [_normalize_vector(v, unknowns, normalize) for v in report.nullspace_basis]


def discover(template: IdentityTemplate, samples: Optional[Sequence[Mapping[str, int]]] = None,
             normalize: Optional[Mapping[str, Any]] = None, extra_rows: int = 0, trials: int = 100,
             seed: int = 0) -> DiscoveryResult:
    """
    建立并求解方程组，把每个候选解代回模板并验证

    主下标以外的下标变量先绑定为小的不同整数；被否定的候选同样返回。
    """
    if not template.unknowns():
        raise PreconditionError("discover 需要含未知系数的模板")
    bindings = extra_index_bindings(template)
    bound = substitute(template, bindings) if bindings else template
    if bindings:
        logger.info("额外下标绑定为 %s", bindings)
    if samples is None:
        samples = default_samples(bound, len(bound.unknowns()) + extra_rows)
    system = build_system(bound, samples)
    report = solve(system)
    result = DiscoveryResult(bound, system, report)
    base = template.name or "discovered"
    for i, vector in enumerate(_candidate_vectors(report, system.unknowns, normalize or {}), start=1):
        values = dict(zip(system.unknowns, vector))
        candidate = bind_unknowns(bound, values, name=f"{base}#{i}")
        verdict = verify(candidate, trials=trials, seed=seed)
        result.solutions.append(candidate)
        result.vectors.append(vector)
        result.verdicts.append(verdict)
    logger.info("发现 %d 个候选，其中 %d 个通过验证", len(result.solutions), len(result.verified))
    return result


# ===== 幂表示 =====

def _require_kind(kind: str) -> str:
    kind = kind.upper()
    if kind not in ("U", "V"):
        raise PreconditionError(f"kind 只能是 U 或 V: {kind}")
    return kind


def _power_factors(i: int, m: int) -> Tuple[SeqFactor, ...]:
    k = IndexExpr.var("k")
    factors = []
    if i:
        factors.append(SeqFactor("U", k, i))
    if m - i:
        factors.append(SeqFactor("U", k + 1, m - i))
    return tuple(factors)


def power_ansatz(m: int, kind: str = "U") -> IdentityTemplate:
    """X[mk] = Σ a_i U[k]^i U[k+1]^{m-i}，系数 a_0..a_m 未知"""
    kind = _require_kind(kind)
    if m < 1:
        raise PreconditionError(f"m 必须是正整数: {m}")
    head = Term(_ONE, factors=(SeqFactor(kind, IndexExpr.var("k", m)),), side=0)
    terms = [head] + [Term(-_ONE, unknown=f"a{i}", factors=_power_factors(i, m), side=1) for i in range(m + 1)]
    return IdentityTemplate(terms, ["k"], name=f"ANSATZ.{kind}{m}")


def power_representation(m: int, kind: str = "U", cross_check: bool = False) -> IdentityTemplate:
    """
    U_{mk} = Σ C(m,i)(-1)^{i+1} U_i U_k^i U_{k+1}^{m-i}
    V_{mk} = Σ C(m,i)(-1)^i V_i U_k^i U_{k+1}^{m-i}

    结果必须通过验证；cross_check 时再与待定系数法的唯一解比对。
    """
    kind = _require_kind(kind)
    if m < 1:
        raise PreconditionError(f"m 必须是正整数: {m}")
    head = Term(_ONE, factors=(SeqFactor(kind, IndexExpr.var("k", m)),), side=0)
    terms = [head]
    coefficients = {}
    for i in range(m + 1):
        sign = (-1) ** (i + 1) if kind == "U" else (-1) ** i
        c = lucas_symbolic(kind, i) * (comb(m, i) * sign)
        coefficients[f"a{i}"] = c
        if not c.is_zero():
            terms.append(Term(-c, factors=_power_factors(i, m), side=1))
    template = IdentityTemplate(terms, ["k"], name=f"POWREP.{kind}{m}")
    verdict = verify(template)
    if not verdict.verified:
        raise LucasIdentityError(f"幂表示 {template.name} 未通过验证: {verdict.witness}")
    if cross_check:
        ansatz = power_ansatz(m, kind)
        report = solve(build_system(ansatz, default_samples(ansatz)))
        if report.nullity != 0 or report.particular is None:
            raise LucasIdentityError(f"{ansatz.name} 的方程组没有唯一解")
        found = dict(zip(ansatz.unknowns(), report.particular))
        if any(found[name] != value for name, value in coefficients.items()):
            raise LucasIdentityError(f"{template.name} 与待定系数法的解不一致")
    return template


# ===== JSON =====

def vector_to_dict(vector: Vector, unknowns: Sequence[str]) -> Dict[str, str]:
    return {u: render_ratfunc(v) for u, v in zip(unknowns, vector)}


def system_to_dict(system: AnsatzSystem) -> Dict[str, Any]:
    return {
        "unknowns": list(system.unknowns),
        "samples": [dict(sorted(s.items())) for s in system.samples],
        "matrix": [[render_ratfunc(x) for x in row] for row in system.matrix],
        "rhs": [render_ratfunc(x) for x in system.rhs],
    }


def report_to_dict(report: SolutionReport, unknowns: Sequence[str]) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "rank": report.rank,
        "nullity": report.nullity,
        "consistent": report.consistent,
        "nullspace": [vector_to_dict(v, unknowns) for v in report.nullspace_basis],
        "parameter_conditions": list(report.parameter_conditions),
    }
    if report.determinant is not None:
        data["determinant"] = render_ratfunc(report.determinant)
        data["determinant_factored"] = factored_text(report.determinant)
    if report.particular is not None:
        data["particular"] = vector_to_dict(report.particular, unknowns)
    return data
