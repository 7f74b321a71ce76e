"""
恒等式 DSL：词法分析、递归下降解析、文本与 JSON 渲染

语法（EBNF 概要）：
    identity  := expr ("=" expr)? ;
    expr      := term (("+"|"-") term)* ;
    term      := power (("*"|"/") power)* ;
    power     := atom ("^" exponent)? ;
    atom      := integer | ident | seqref | "(" expr ")" ;
    seqref    := ("U"|"V"|"W") "[" indexexpr "]" ;
Q 的指数可以是仿射下标表达式（如 Q^(k-n)），其他底的指数必须是整数常量。
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

from .algebra import RationalFunction, format_rational, render_ratfunc
from .exceptions import ConfigurationError, IdentitySyntaxError, LucasIdentityError
from .identity import (
    HORADAM_NAMES, PARAMETER_NAMES, RESERVED_NAMES, SEQUENCE_KINDS, ZERO_INDEX,
    IdentityTemplate, IndexExpr, SeqFactor, Term, TermSum,
)
from .lucas import HoradamParams

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_OPERATORS = set("+-*/^()[]=,")


@dataclass(frozen=True)
class Token:
    kind: str  # INT | NAME | OP | END
    value: Any
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    lines = text.splitlines() or [""]
    for line_no, line in enumerate(lines, start=1):
        pos = 0
        while pos < len(line):
            match = _TOKEN_RE.match(line, pos)
            if match is None or match.end() == pos:
                break
            number, name, op = match.groups()
            column = match.start(match.lastindex) + 1 if match.lastindex else pos + 1
            if number is not None:
                tokens.append(Token("INT", int(number), line_no, column))
            elif name is not None:
                tokens.append(Token("NAME", name, line_no, column))
            elif op is not None:
                if op not in _OPERATORS:
                    raise IdentitySyntaxError(f"非法字符 '{op}'", line_no, column)
                tokens.append(Token("OP", op, line_no, column))
            pos = match.end()
    tokens.append(Token("END", None, len(lines), len(lines[-1]) + 1))
    return tokens


def _scan_index_vars(tokens: List[Token]) -> Set[str]:
    """出现在方括号内或 Q 的指数中的标识符即下标变量"""
    names: Set[str] = set()
    depth = 0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "OP" and tok.value == "[":
            depth += 1
        elif tok.kind == "OP" and tok.value == "]":
            depth -= 1
        elif tok.kind == "NAME" and depth > 0:
            names.add(tok.value)
        elif (tok.kind == "NAME" and tok.value == "Q" and i + 1 < len(tokens)
              and tokens[i + 1].kind == "OP" and tokens[i + 1].value == "^"):
            j = i + 2
            if j < len(tokens) and tokens[j].kind == "NAME":
                names.add(tokens[j].value)
            elif j < len(tokens) and tokens[j].kind == "OP" and tokens[j].value == "(":
                level = 0
                while j < len(tokens):
                    t = tokens[j]
                    if t.kind == "OP" and t.value == "(":
                        level += 1
                    elif t.kind == "OP" and t.value == ")":
                        level -= 1
                        if level == 0:
                            break
                    elif t.kind == "NAME":
                        names.add(t.value)
                    j += 1
        i += 1
    reserved = names & set(RESERVED_NAMES)
    if reserved:
        raise IdentitySyntaxError(f"保留名不能作为下标变量: {', '.join(sorted(reserved))}")
    return names


class _Parser:
    """递归下降解析器，直接构造 TermSum"""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.index_vars = _scan_index_vars(self.tokens)

    # ===== 基础 =====

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Token = None):
        token = token or self.current
        return IdentitySyntaxError(message, token.line, token.column)

    def _at(self, value: str) -> bool:
        tok = self.current
        return tok.kind == "OP" and tok.value == value

    def _expect(self, value: str) -> Token:
        if not self._at(value):
            found = self.current.value if self.current.kind != "END" else "输入结束"
            raise self._error(f"期望 '{value}'，实际为 '{found}'")
        tok = self.current
        self.pos += 1
        return tok

    def _advance(self) -> Token:
        tok = self.current
        self.pos += 1
        return tok

    # ===== 恒等式 =====

    def parse_identity(self) -> TermSum:
        lhs = self.parse_expr()
        if self._at("="):
            self._advance()
            rhs = self.parse_expr()
            result = lhs.with_side(0) + (-rhs).with_side(1)
        else:
            result = lhs
        if self.current.kind != "END":
            raise self._error(f"多余的输入 '{self.current.value}'")
        return result

    def parse_expr(self) -> TermSum:
        sign = 1
        if self._at("+") or self._at("-"):
            sign = -1 if self._advance().value == "-" else 1
        result = self.parse_term()
        if sign < 0:
            result = -result
        while self._at("+") or self._at("-"):
            op = self._advance().value
            rhs = self.parse_term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def parse_term(self) -> TermSum:
        result = self.parse_power()
        while self._at("*") or self._at("/"):
            op_token = self._advance()
            rhs = self.parse_power()
            if op_token.value == "*":
                result = result * rhs
            else:
                try:
                    result = result / rhs
                except LucasIdentityError as exc:
                    raise self._error(str(exc), op_token) from exc
        return result

    def parse_power(self) -> TermSum:
        tok = self.current
        if tok.kind == "NAME" and tok.value == "Q" and self.tokens[self.pos + 1].kind == "OP" \
                and self.tokens[self.pos + 1].value == "^":
            self.pos += 2
            exponent = self._parse_exponent(allow_index=True)
            if exponent.is_constant():
                return TermSum.constant(RationalFunction.variable("Q") ** exponent.constant)
            return TermSum.q_power(exponent)
        base = self.parse_atom()
        if self._at("^"):
            caret = self._advance()
            exponent = self._parse_exponent(allow_index=False)
            try:
                return base ** exponent.constant
            except LucasIdentityError as exc:
                raise self._error(str(exc), caret) from exc
        return base

    def _parse_exponent(self, allow_index: bool) -> IndexExpr:
        tok = self.current
        if self._at("("):
            self._advance()
            exponent = self.parse_index_expr()
            self._expect(")")
        elif self._at("-"):
            self._advance()
            if self.current.kind != "INT":
                raise self._error("指数必须是整数")
            exponent = IndexExpr.const(-self._advance().value)
        elif self.current.kind == "INT":
            exponent = IndexExpr.const(self._advance().value)
        elif self.current.kind == "NAME" and allow_index:
            exponent = IndexExpr.var(self._advance().value)
        else:
            raise self._error("指数必须是整数")
        if not allow_index and not exponent.is_constant():
            raise self._error("只有 Q 可以带符号指数", tok)
        return exponent

    def parse_atom(self) -> TermSum:
        tok = self.current
        if tok.kind == "INT":
            self._advance()
            return TermSum.constant(tok.value)
        if self._at("("):
            self._advance()
            inner = self.parse_expr()
            self._expect(")")
            return inner
        if tok.kind == "NAME":
            self._advance()
            name = tok.value
            if name in SEQUENCE_KINDS:
                self._expect("[")
                index = self.parse_index_expr()
                self._expect("]")
                return TermSum.factor(SeqFactor(name, index))
            if name in PARAMETER_NAMES or name in HORADAM_NAMES:
                return TermSum.constant(RationalFunction.variable(name))
            if name in self.index_vars:
                raise IdentitySyntaxError(f"下标变量 '{name}' 不能作为系数使用", tok.line, tok.column)
            if self.current.kind == "OP" and self.current.value == "[":
                raise self._error(f"未知的序列类型 '{name}'", tok)
            return TermSum.unknown(name)
        if tok.kind == "END":
            raise self._error("表达式意外结束")
        raise self._error(f"意外的符号 '{tok.value}'")

    # ===== 仿射下标 =====

    def parse_index_expr(self) -> IndexExpr:
        sign = 1
        if self._at("+") or self._at("-"):
            sign = -1 if self._advance().value == "-" else 1
        result = self._parse_index_term().scale(sign)
        while self._at("+") or self._at("-"):
            op = self._advance().value
            rhs = self._parse_index_term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _parse_index_term(self) -> IndexExpr:
        result = self._parse_index_atom()
        while True:
            if self._at("*"):
                self._advance()
            elif not (self.current.kind == "NAME" or self._at("(")):
                break
            tok = self.current
            rhs = self._parse_index_atom()
            if result.is_constant():
                result = rhs.scale(result.constant)
            elif rhs.is_constant():
                result = result.scale(rhs.constant)
            else:
                raise IdentitySyntaxError("下标必须是仿射表达式", tok.line, tok.column)
        return result

    def _parse_index_atom(self) -> IndexExpr:
        tok = self.current
        if tok.kind == "INT":
            self._advance()
            return IndexExpr.const(tok.value)
        if tok.kind == "NAME":
            if tok.value in RESERVED_NAMES:
                raise self._error(f"保留名 '{tok.value}' 不能出现在下标中")
            self._advance()
            return IndexExpr.var(tok.value)
        if self._at("("):
            self._advance()
            inner = self.parse_index_expr()
            self._expect(")")
            return inner
        if self._at("-"):
            self._advance()
            return -self._parse_index_atom()
        raise self._error("无效的下标表达式")


def parse_identity(text: str, name: Optional[str] = None, params: Optional[Mapping[str, Any]] = None,
                   horadam: Optional[HoradamParams] = None) -> IdentityTemplate:
    """解析 DSL 文本；`LHS = RHS` 规范化为 LHS - RHS ≡ 0"""
    parser = _Parser(text)
    terms = parser.parse_identity()
    logger.debug("解析恒等式 %s: %d 项", name or "", len(terms.terms))
    return IdentityTemplate(terms.terms, sorted(parser.index_vars), name, params, horadam)


def parse_coefficient(text: str) -> RationalFunction:
    """解析只含参数的系数表达式，如 (P^2-Q)/Q^3"""
    parser = _Parser(str(text))
    value = parser.parse_expr()
    if parser.current.kind != "END":
        raise parser._error(f"多余的输入 '{parser.current.value}'")
    constant = value.as_constant()
    if constant is None:
        raise IdentitySyntaxError(f"系数表达式不能含序列项或未知量: {text}")
    return constant


# ===== .lid 文件 =====

def parse_lid(text: str, name: Optional[str] = None) -> IdentityTemplate:
    """
    解析 .lid 文本：'#' 注释，可选前导指令

        @name GF.9
        @params a0=1, a1=0, p0=P, p1=-Q     (Horadam 参数)
        @specialize P=1, Q=-1              (参数特化)
    """
    body: List[str] = []
    params: Dict[str, Fraction] = {}
    horadam_values: Dict[str, RationalFunction] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            body.append("")
            continue
        if stripped.startswith("@"):
            directive, _, rest = stripped[1:].partition(" ")
            if directive == "name":
                name = rest.strip()
            elif directive == "params":
                horadam_values.update(_parse_bindings(rest, HORADAM_NAMES))
            elif directive == "specialize":
                for key, value in _parse_bindings(rest, PARAMETER_NAMES).items():
                    if not value.is_constant():
                        raise IdentitySyntaxError(f"@specialize 只接受有理数: {key}")
                    params[key] = value.constant_value()
            else:
                raise IdentitySyntaxError(f"未知的指令 '@{directive}'")
            body.append("")
            continue
        body.append(line)
    horadam = None
    if horadam_values:
        missing = [n for n in HORADAM_NAMES if n not in horadam_values]
        if missing:
            raise IdentitySyntaxError(f"@params 缺少: {', '.join(missing)}")
        horadam = HoradamParams(**horadam_values)
    return parse_identity("\n".join(body), name=name, params=params, horadam=horadam)


def _parse_bindings(text: str, allowed) -> Dict[str, RationalFunction]:
    result = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise IdentitySyntaxError(f"无效的绑定 '{item.strip()}'，可用名称: {', '.join(allowed)}")
        result[key] = parse_coefficient(value)
    return result


def load_lid(path: str) -> IdentityTemplate:
    file = Path(path)
    if not file.exists():
        raise ConfigurationError(f"恒等式文件不存在: {path}")
    return parse_lid(file.read_text(encoding="utf-8"), name=file.stem)


# ===== 文本渲染 =====

def _coefficient_text(c: RationalFunction) -> str:
    if c.is_constant():
        return format_rational(c.constant_value())
    if c.den == 1:
        text = render_ratfunc(c)
        return f"({text})" if len(c.num.terms) > 1 else text
    return render_ratfunc(c)


def render_term(term: Term, negate: bool = False) -> Tuple[str, str]:
    """返回 (符号, 正文)"""
    c = -term.coefficient if negate else term.coefficient
    sign = "+"
    if c.num.leading_coefficient() < 0:
        sign, c = "-", -c
    parts = []
    rest = []
    if term.unknown is not None:
        rest.append(term.unknown)
    if term.q_exponent != ZERO_INDEX:
        q = term.q_exponent
        if len(q.coeffs) == 1 and q.coeffs[0][1] == 1:
            rest.append(f"Q^{q.coeffs[0][0]}")
        else:
            rest.append(f"Q^({q})")
    rest.extend(str(f) for f in term.factors)
    if c != 1 or not rest:
        parts.append(_coefficient_text(c))
    parts.extend(rest)
    return sign, "*".join(parts)


def _join(pieces) -> str:
    if not pieces:
        return "0"
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def render_text(template: IdentityTemplate) -> str:
    lhs = [render_term(t) for t in template.terms if t.side == 0]
    rhs = [render_term(t, negate=True) for t in template.terms if t.side == 1]
    return f"{_join(lhs)} = {_join(rhs)}"


def render_lid(template: IdentityTemplate) -> str:
    """带前导指令的完整 .lid 文本"""
    lines = []
    if template.name:
        lines.append(f"@name {template.name}")
    if template.horadam is not None:
        values = ", ".join(f"{n}={_coefficient_text(RationalFunction.coerce(getattr(template.horadam, n)))}"
                           for n in HORADAM_NAMES)
        lines.append(f"@params {values}")
    if template.params:
        values = ", ".join(f"{k}={format_rational(v)}" for k, v in sorted(template.params.items()))
        lines.append(f"@specialize {values}")
    lines.append(render_text(template))
    return "\n".join(lines) + "\n"


# ===== JSON =====

def _index_to_dict(index: IndexExpr) -> Dict[str, Any]:
    return {"coeffs": dict(index.coeffs), "const": index.constant}


def _index_from_dict(data: Mapping[str, Any]) -> IndexExpr:
    return IndexExpr.build(data.get("coeffs", {}), data.get("const", 0))


def template_to_dict(template: IdentityTemplate) -> Dict[str, Any]:
    terms = []
    for t in template.terms:
        if t.unknown is None:
            coeff = {"kind": "known", "value": _coefficient_text(t.coefficient)}
        else:
            coeff = {"kind": "unknown", "name": t.unknown}
            if t.coefficient != 1:
                coeff["value"] = _coefficient_text(t.coefficient)
        terms.append({
            "coeff": coeff,
            "qexp": _index_to_dict(t.q_exponent),
            "factors": [{"kind": f.kind, "index": _index_to_dict(f.index), "exp": f.exponent} for f in t.factors],
            "side": t.side,
        })
    data: Dict[str, Any] = {"name": template.name, "index_vars": list(template.index_vars), "terms": terms}
    if template.params:
        data["params"] = {k: format_rational(v) for k, v in sorted(template.params.items())}
    if template.horadam is not None:
        data["horadam"] = {n: _coefficient_text(RationalFunction.coerce(getattr(template.horadam, n)))
                           for n in HORADAM_NAMES}
    return data


def template_from_dict(data: Mapping[str, Any]) -> IdentityTemplate:
    terms = []
    for item in data["terms"]:
        coeff = item["coeff"]
        value = parse_coefficient(coeff["value"]) if "value" in coeff else RationalFunction(1)
        unknown = coeff.get("name") if coeff["kind"] == "unknown" else None
        factors = tuple(SeqFactor(f["kind"], _index_from_dict(f["index"]), int(f["exp"])) for f in item["factors"])
        terms.append(Term(value, unknown, _index_from_dict(item["qexp"]), factors, int(item.get("side", 0))))
    params = {k: Fraction(v) for k, v in data.get("params", {}).items()}
    horadam = None
    if data.get("horadam"):
        horadam = HoradamParams(**{n: parse_coefficient(v) for n, v in data["horadam"].items()})
    return IdentityTemplate(terms, data.get("index_vars", []), data.get("name"), params, horadam)


def render(template: IdentityTemplate, format: str = "text") -> str:
    """渲染为 text 或 json（键有序，便于逐字节比较）"""
    if format == "text":
        return render_text(template)
    if format == "json":
        return json.dumps(template_to_dict(template), ensure_ascii=False, sort_keys=True, indent=2)
    raise ValueError(f"未知的输出格式: {format}")
