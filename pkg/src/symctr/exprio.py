"""Parsing, printing and JSON serialization of operator expressions.

The surface grammar builds operators as sums of
``coefficient * derivative-token`` terms:

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*      ; '/' only before an integer
    factor  := '-' factor | power
    power   := atom ('^' ['-'] INT)?             ; negative only on variables
    atom    := INT | 'i' | variable | 'exp' '(' expr ')'
             | 'd' '[' variable {',' variable} ']' | '(' expr ')'

A derivative token must be the last factor of its term and cannot be
exponentiated; operator composition is a CLI verb, never expression syntax.
Exponential arguments must be linear forms in the variables with no
constant term.  Exact scalars serialize as ``{"re": "p/q", "im": "r/s"}``
strings, never as JSON numbers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .coeffring import Coefficient, GaussianRational, I, ONE, ZERO, term_sort_key
from .errors import ExprParseError
from .opalg import DiffOperator, deriv_sort_key

SCHEMA_VERSION = 1

_RESERVED = {"i", "d", "exp"}


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.value!r}"


_SYMBOLS = set("+-*/^()[],")


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    k = 0
    while k < len(text):
        ch = text[k]
        if ch == "\n":
            line += 1
            col = 1
            k += 1
            continue
        if ch.isspace():
            col += 1
            k += 1
            continue
        if ch.isdigit():
            start = k
            while k < len(text) and text[k].isdigit():
                k += 1
            tokens.append(_Token("int", int(text[start:k]), line, col))
            col += k - start
            continue
        if ch.isalpha() or ch == "_":
            start = k
            while k < len(text) and (text[k].isalnum() or text[k] == "_"):
                k += 1
            tokens.append(_Token("name", text[start:k], line, col))
            col += k - start
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token(ch, ch, line, col))
            col += 1
            k += 1
            continue
        raise ExprParseError(f"unexpected character {ch!r}", line, col, ch)
    tokens.append(_Token("end", None, line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    """Recursive-descent parser producing exact operators.

    Intermediate values are ``("coeff", Coefficient)`` or
    ``("opterm", Coefficient, alpha)``; sums accumulate a ``DiffOperator``.
    """

    def __init__(self, text: str, variables: Sequence[str]):
        self.vars = list(variables)
        if self.vars:
            seen = set()
            for name in self.vars:
                if name in _RESERVED:
                    raise ExprParseError(
                        f"variable name {name!r} is reserved", token=name
                    )
                if not name.isidentifier():
                    raise ExprParseError(
                        f"variable name {name!r} is not an identifier", token=name
                    )
                if name in seen:
                    raise ExprParseError(
                        f"duplicate variable name {name!r}", token=name
                    )
                seen.add(name)
        self.dim = max(1, len(self.vars))
        self.tokens = _tokenize(text)
        self.pos = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ExprParseError(
                f"expected {kind!r}", tok.line, tok.col, tok.value
            )
        return tok

    def error(self, message, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise ExprParseError(message, tok.line, tok.col, tok.value)

    # -- grammar ----------------------------------------------------------

    def parse_operator(self) -> DiffOperator:
        op = self.parse_expr()
        tok = self.peek()
        if tok.kind != "end":
            self.error("trailing input after expression")
        return op

    def parse_expr(self) -> DiffOperator:
        total = self._to_operator(self.parse_term())
        while self.peek().kind in ("+", "-"):
            sign = self.next().kind
            term = self._to_operator(self.parse_term())
            total = total + term if sign == "+" else total - term
        return total

    def _to_operator(self, value) -> DiffOperator:
        if value[0] == "coeff":
            return DiffOperator(self.dim, {(0,) * self.dim: value[1]})
        _, coeff, alpha = value
        return DiffOperator(self.dim, {alpha: coeff})

    def parse_term(self):
        value = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.next()
                rhs = self.parse_factor()
                value = self._multiply(value, rhs, tok)
            elif tok.kind == "/":
                self.next()
                den = self.expect("int")
                if den.value == 0:
                    self.error("division by zero", den)
                value = self._scale(value, GaussianRational(Fraction(1, den.value)))
            else:
                return value

    def _multiply(self, lhs, rhs, tok: _Token):
        if lhs[0] == "opterm":
            self.error(
                "a derivative token must end its term; operator products are "
                "not expression syntax (use the 'compose' command)",
                tok,
            )
        if rhs[0] == "coeff":
            return ("coeff", lhs[1] * rhs[1])
        return ("opterm", lhs[1] * rhs[1], rhs[2])

    def _scale(self, value, scalar: GaussianRational):
        if value[0] == "coeff":
            return ("coeff", value[1] * scalar)
        return ("opterm", value[1] * scalar, value[2])

    def parse_factor(self):
        if self.peek().kind == "-":
            self.next()
            inner = self.parse_factor()
            if inner[0] == "coeff":
                return ("coeff", -inner[1])
            return ("opterm", -inner[1], inner[2])
        return self.parse_power()

    def parse_power(self):
        base, is_variable = self.parse_atom()
        if self.peek().kind != "^":
            return base
        caret = self.next()
        if base[0] == "opterm":
            self.error("derivative tokens cannot be exponentiated", caret)
        negative = False
        if self.peek().kind == "-":
            self.next()
            negative = True
        exp_tok = self.expect("int")
        exponent = -exp_tok.value if negative else exp_tok.value
        if negative and not is_variable:
            self.error(
                "negative exponents are allowed on variables only", exp_tok
            )
        coeff = base[1]
        if exponent == 0:
            return ("coeff", Coefficient.one(self.dim))
        if exponent < 0:
            # bare variable: invert the monomial exponent directly
            ((powers, exp_args), scalar) = coeff.terms()[0]
            powers = tuple(p * exponent for p in powers)
            return (
                "coeff",
                Coefficient.monomial(self.dim, powers, scalar, exp_args),
            )
        out = coeff
        for _ in range(exponent - 1):
            out = out * coeff
        return ("coeff", out)

    def parse_atom(self):
        tok = self.next()
        if tok.kind == "int":
            value = GaussianRational(tok.value)
            return ("coeff", Coefficient.scalar(self.dim, value)), False
        if tok.kind == "(":
            inner = self.parse_expr()
            self.expect(")")
            return ("coeff", self._as_coefficient(inner, tok)), False
        if tok.kind == "name":
            if tok.value == "i":
                return ("coeff", Coefficient.scalar(self.dim, I)), False
            if tok.value == "exp":
                return self.parse_exp(tok), False
            if tok.value == "d":
                return self.parse_deriv(tok), False
            if tok.value in self.vars:
                v = self.vars.index(tok.value)
                return ("coeff", Coefficient.variable(self.dim, v)), True
            self.error(f"unknown variable {tok.value!r}", tok)
        self.error("expected a value", tok)

    def _as_coefficient(self, op: DiffOperator, tok: _Token) -> Coefficient:
        if op.order > 0:
            self.error(
                "derivative tokens are not allowed inside this context", tok
            )
        return op.coefficient((0,) * self.dim)

    def parse_exp(self, tok: _Token):
        self.expect("(")
        inner = self.parse_expr()
        self.expect(")")
        coeff = self._as_coefficient(inner, tok)
        lam = [ZERO] * self.dim
        for (powers, exp_args), scalar in coeff.terms():
            if any(not l.is_zero for l in exp_args):
                self.error("exp arguments cannot be nested exponentials", tok)
            if sum(powers) != 1 or any(p < 0 for p in powers) or max(powers) != 1:
                self.error(
                    "exp argument must be a linear form in the variables with "
                    "no constant term",
                    tok,
                )
            v = powers.index(1)
            lam[v] = lam[v] + scalar
        if all(l.is_zero for l in lam):
            self.error("exp argument must not be identically zero", tok)
        return ("coeff", Coefficient.monomial(self.dim, (0,) * self.dim, ONE, lam))

    def parse_deriv(self, tok: _Token):
        if not self.vars:
            self.error("derivative tokens need declared variables", tok)
        self.expect("[")
        alpha = [0] * self.dim
        while True:
            name = self.expect("name")
            if name.value not in self.vars:
                self.error(f"unknown variable {name.value!r}", name)
            alpha[self.vars.index(name.value)] += 1
            nxt = self.next()
            if nxt.kind == "]":
                break
            if nxt.kind != ",":
                self.error("expected ',' or ']' in derivative token", nxt)
        return ("opterm", Coefficient.one(self.dim), tuple(alpha))


def parse_operator(text: str, variables: Sequence[str]) -> DiffOperator:
    """Parse an operator expression over the declared variables."""
    if not variables:
        raise ExprParseError("need at least one declared variable")
    return _Parser(text, variables).parse_operator()


def parse_scalar(text: str) -> GaussianRational:
    """Parse a constant expression such as ``3/2``, ``-1``, ``1+2*i``."""
    parser = _Parser(text, [])
    op = parser.parse_operator()
    coeff = op.coefficient((0,) * parser.dim)
    for (powers, exp_args), _ in coeff.terms():
        if any(powers) or any(not l.is_zero for l in exp_args):
            raise ExprParseError("expected a constant expression", token=text)
    return coeff.constant_part()


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _scalar_is_negative(q: GaussianRational) -> bool:
    return q.re < 0 or (q.re == 0 and q.im < 0)


def _scalar_text(q: GaussianRational, in_product: bool) -> str:
    if q.im == 0:
        return str(q.re)
    if q.re == 0:
        if q.im == 1:
            return "i"
        if q.im == -1:
            return "-i"
        return f"{q.im}*i"
    im = q.im
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{mag}*i"
    inner = f"{q.re} {sign} {imag}"
    return f"({inner})" if in_product else inner


def _coeff_term_text(powers, exp_args, scalar, variables, in_product=False) -> str:
    pieces = []
    for v, p in enumerate(powers):
        if p == 0:
            continue
        name = variables[v]
        pieces.append(name if p == 1 else f"{name}^{p}")
    if any(not l.is_zero for l in exp_args):
        arg_terms = []
        for v, l in enumerate(exp_args):
            if l.is_zero:
                continue
            arg_terms.append((l, variables[v]))
        parts = []
        for k, (l, name) in enumerate(arg_terms):
            neg = _scalar_is_negative(l)
            mag = -l if neg else l
            body = name if mag == ONE else f"{_scalar_text(mag, True)}*{name}"
            if k == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"{'-' if neg else '+'} {body}")
        pieces.append(f"exp({' '.join(parts)})")
    if not pieces:
        return _scalar_text(scalar, in_product)
    if scalar == ONE:
        return "*".join(pieces)
    if scalar == -ONE:
        return "-" + "*".join(pieces)
    return "*".join([_scalar_text(scalar, True)] + pieces)


def _coefficient_text(coeff: Coefficient, variables) -> str:
    parts = []
    for k, ((powers, exp_args), scalar) in enumerate(coeff.terms()):
        neg = _scalar_is_negative(scalar)
        mag = -scalar if neg else scalar
        # a negated mixed scalar must stay grouped under the minus sign
        body = _coeff_term_text(powers, exp_args, mag, variables, in_product=neg)
        if k == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"{'-' if neg else '+'} {body}")
    return " ".join(parts)


def _deriv_token(alpha, variables) -> str:
    names = []
    for v, k in enumerate(alpha):
        names.extend([variables[v]] * k)
    return f"d[{','.join(names)}]"


def print_operator(op: DiffOperator, variables: Sequence[str], style: str = "text") -> str:
    """Deterministic rendering; the text style round-trips through parsing."""
    if style == "latex":
        return _print_latex(op, variables)
    if style != "text":
        raise ValueError(f"unknown style {style!r}")
    if op.is_zero:
        return "0"
    if len(variables) != op.dim:
        raise ValueError("variable name count does not match operator dim")
    chunks = []
    terms = sorted(op.terms(), key=lambda kv: deriv_sort_key(kv[0]), reverse=True)
    for alpha, coeff in terms:
        is_identity = not any(alpha)
        term_items = coeff.terms()
        if len(term_items) == 1:
            ((powers, exp_args), scalar) = term_items[0]
            neg = _scalar_is_negative(scalar)
            mag = -scalar if neg else scalar
            body = _coeff_term_text(
                powers, exp_args, mag, variables, in_product=not is_identity or neg
            )
            if not is_identity:
                trivial = body == "1"
                lead = "" if trivial else f"{body}*"
                if body.startswith("-"):
                    lead = f"({body})*"
                body = f"{lead}{_deriv_token(alpha, variables)}"
            chunks.append(("-" if neg else "+", body))
        else:
            body = f"({_coefficient_text(coeff, variables)})"
            if not is_identity:
                body = f"{body}*{_deriv_token(alpha, variables)}"
            chunks.append(("+", body))
    sign, body = chunks[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def _scalar_latex(q: GaussianRational) -> str:
    def frac(f: Fraction) -> str:
        if f.denominator == 1:
            return str(f.numerator)
        sign = "-" if f < 0 else ""
        return f"{sign}\\frac{{{abs(f.numerator)}}}{{{f.denominator}}}"

    if q.im == 0:
        return frac(q.re)
    if q.re == 0:
        if q.im == 1:
            return "i"
        if q.im == -1:
            return "-i"
        return f"{frac(q.im)} i"
    sign = "+" if q.im > 0 else "-"
    mag = abs(q.im)
    imag = "i" if mag == 1 else f"{frac(mag)} i"
    return f"\\left({frac(q.re)} {sign} {imag}\\right)"


def _print_latex(op: DiffOperator, variables) -> str:
    if op.is_zero:
        return "0"
    pieces = []
    terms = sorted(op.terms(), key=lambda kv: deriv_sort_key(kv[0]), reverse=True)
    for alpha, coeff in terms:
        coeff_parts = []
        for (powers, exp_args), scalar in coeff.terms():
            bits = [_scalar_latex(scalar)]
            for v, p in enumerate(powers):
                if p == 0:
                    continue
                bits.append(
                    variables[v] if p == 1 else f"{variables[v]}^{{{p}}}"
                )
            if any(not l.is_zero for l in exp_args):
                arg = " + ".join(
                    f"{_scalar_latex(l)} {variables[v]}"
                    for v, l in enumerate(exp_args)
                    if not l.is_zero
                )
                bits.append(f"e^{{{arg}}}")
            coeff_parts.append(" ".join(bits))
        coeff_tex = " + ".join(coeff_parts)
        if len(coeff_parts) > 1:
            coeff_tex = f"\\left({coeff_tex}\\right)"
        dtex = " ".join(
            f"\\partial_{{{variables[v]}}}" + (f"^{{{k}}}" if k > 1 else "")
            for v, k in enumerate(alpha)
            if k
        )
        pieces.append(f"{coeff_tex} {dtex}".strip())
    return " + ".join(pieces)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def scalar_to_json(q: GaussianRational) -> dict:
    return {"re": str(q.re), "im": str(q.im)}


def scalar_from_json(doc: dict) -> GaussianRational:
    return GaussianRational(Fraction(doc["re"]), Fraction(doc["im"]))


def _coeff_to_json(coeff: Coefficient) -> list:
    out = []
    for (powers, exp_args), scalar in coeff.terms():
        entry = {"scalar": scalar_to_json(scalar), "powers": list(powers)}
        if any(not l.is_zero for l in exp_args):
            entry["exp"] = [scalar_to_json(l) for l in exp_args]
        out.append(entry)
    return out


def _coeff_from_json(entries: list, dim: int) -> Coefficient:
    terms = {}
    for entry in entries:
        powers = tuple(entry["powers"])
        exp = entry.get("exp")
        exp_args = (
            tuple(scalar_from_json(v) for v in exp)
            if exp is not None
            else (ZERO,) * dim
        )
        terms[(powers, exp_args)] = scalar_from_json(entry["scalar"])
    return Coefficient(dim, terms)


def _op_terms_to_json(op: DiffOperator) -> list:
    return [
        {"deriv": list(alpha), "coeff": _coeff_to_json(coeff)}
        for alpha, coeff in op.terms()
    ]


def _op_terms_from_json(entries: list, dim: int) -> DiffOperator:
    return DiffOperator(
        dim,
        {
            tuple(entry["deriv"]): _coeff_from_json(entry["coeff"], dim)
            for entry in entries
        },
    )


def operator_to_json(op: DiffOperator, variables: Sequence[str]) -> dict:
    return {
        "kind": "operator",
        "version": SCHEMA_VERSION,
        "vars": list(variables),
        "terms": _op_terms_to_json(op),
    }


def operator_from_json(doc: dict):
    _require_kind(doc, "operator")
    variables = list(doc["vars"])
    dim = len(variables)
    return _op_terms_from_json(doc["terms"], dim), variables


def basis_to_json(ops: Sequence[DiffOperator], variables: Sequence[str], order: Optional[int] = None) -> dict:
    return {
        "kind": "basis",
        "version": SCHEMA_VERSION,
        "vars": list(variables),
        "order": order,
        "operators": [_op_terms_to_json(op) for op in ops],
    }


def basis_from_json(doc: dict):
    _require_kind(doc, "basis")
    variables = list(doc["vars"])
    dim = len(variables)
    ops = [_op_terms_from_json(entries, dim) for entries in doc["operators"]]
    return ops, variables, doc.get("order")


def structure_constants_to_json(constants) -> dict:
    return {
        "kind": "structure-constants",
        "version": SCHEMA_VERSION,
        "size": len(constants.table),
        "unit": constants.unit,
        "table": [
            [[scalar_to_json(v) for v in row] for row in plane]
            for plane in constants.table
        ],
    }


def structure_constants_from_json(doc: dict):
    _require_kind(doc, "structure-constants")
    from .liealg import StructureConstants

    table = [
        [[scalar_from_json(v) for v in row] for row in plane]
        for plane in doc["table"]
    ]
    return StructureConstants(table=table, unit=doc.get("unit"))


def linear_system_summary_to_json(system) -> dict:
    summary = system.summary()
    return {
        "kind": "linear-system-summary",
        "version": SCHEMA_VERSION,
        **summary,
    }


def report_to_json(
    model: str,
    check: str,
    items: Sequence[dict],
    variables: Sequence[str],
    informational: Sequence[dict] = (),
    metadata: Optional[dict] = None,
) -> dict:
    def encode(item):
        out = {"label": item["label"], "exact": bool(item["exact"])}
        for key in ("lhs", "rhs", "residual"):
            value = item.get(key)
            if value is not None:
                out[key] = {
                    "text": print_operator(value, variables),
                    "terms": _op_terms_to_json(value),
                }
        if "note" in item:
            out["note"] = item["note"]
        return out

    return {
        "kind": "report",
        "version": SCHEMA_VERSION,
        "model": model,
        "check": check,
        "vars": list(variables),
        "items": [encode(item) for item in items],
        "informational": [encode(item) for item in informational],
        "metadata": metadata or {},
    }


def _require_kind(doc: dict, kind: str):
    if doc.get("kind") != kind:
        raise ValueError(f"expected a {kind!r} document, got {doc.get('kind')!r}")
    if doc.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported document version {doc.get('version')!r}")


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_schema(kind: str) -> dict:
    """Load the published JSON schema for a document kind."""
    name = kind.replace("-", "_") + ".schema.json"
    with resources.files("symctr.schemas").joinpath(name).open() as handle:
        return json.load(handle)
