"""Equation family

    D^a D^a y + (k / x^a) D^a y + sum_t c_t x^(s_t a) F_t(y) = sum_j r_j x^(j a)

with F_t(y) = y**n or exp(lam*y), plus validation, JSON and a small text DSL.
Powers of x in the DSL are in units of alpha: ``x^2`` means ``x^(2 alpha)``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class Power:
    n: int


@dataclass(frozen=True)
class Exp:
    lam: float


SourceKind = Union[Power, Exp]


@dataclass(frozen=True)
class SourceTerm:
    c: float
    s: int
    kind: SourceKind


@dataclass(frozen=True)
class EquationSpec:
    alpha: float
    k: float
    terms: tuple[SourceTerm, ...] = ()
    rhs: tuple[float, ...] = ()
    y0: float = 0.0
    dy0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "rhs", tuple(float(r) for r in self.rhs))

    def with_alpha(self, alpha: float) -> EquationSpec:
        return EquationSpec(alpha, self.k, self.terms, self.rhs, self.y0, self.dy0)


class SpecError(ValueError):
    """Invalid equation or malformed JSON; ``field`` names the culprit."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


class UnsupportedTermError(ParseError):
    pass


def validate(spec: EquationSpec) -> list[str]:
    """All violated invariants; an empty list means the equation is usable."""
    problems = []

    def finite(name, value):
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            problems.append(f"{name} is not a finite number: {value!r}")
            return False
        return True

    if finite("alpha", spec.alpha) and not (0.0 < spec.alpha <= 1.0):
        problems.append(f"alpha out of range (0, 1]: {spec.alpha!r}")
    finite("k", spec.k)
    finite("y0", spec.y0)
    finite("dy0", spec.dy0)
    for j, r in enumerate(spec.rhs):
        finite(f"rhs[{j}]", r)
    for i, t in enumerate(spec.terms):
        finite(f"terms[{i}].c", t.c)
        if not isinstance(t.s, int) or t.s < 0:
            problems.append(f"terms[{i}].s must be a non-negative integer: {t.s!r}")
        if isinstance(t.kind, Power):
            if not isinstance(t.kind.n, int) or t.kind.n < 0:
                problems.append(f"terms[{i}] power must be a non-negative integer: {t.kind.n!r}")
        elif isinstance(t.kind, Exp):
            if finite(f"terms[{i}].lam", t.kind.lam) and t.kind.lam == 0:
                problems.append(f"terms[{i}] exponential rate must be nonzero")
        else:
            problems.append(f"terms[{i}] has unknown kind {t.kind!r}")
    if not problems and spec.k != 0 and spec.dy0 != 0:
        problems.append("nonzero first derivative with singular drag (k != 0 requires dy0 = 0)")
    return problems


# -- JSON -------------------------------------------------------------------


def spec_to_dict(spec: EquationSpec) -> dict:
    terms = []
    for t in spec.terms:
        kind = {"power": t.kind.n} if isinstance(t.kind, Power) else {"exp": t.kind.lam}
        terms.append({"c": t.c, "s": t.s, "kind": kind})
    return {
        "alpha": spec.alpha,
        "k": spec.k,
        "terms": terms,
        "rhs": list(spec.rhs),
        "y0": spec.y0,
        "dy0": spec.dy0,
    }


def spec_to_json(spec: EquationSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)


def _number(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise SpecError(f"missing field {where}{key!r}", f"{where}{key}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"field {where}{key!r} must be a number, got {v!r}", f"{where}{key}")
    return float(v)


def _integer(obj: dict, key: str, where: str) -> int:
    v = obj.get(key)
    if key not in obj:
        raise SpecError(f"missing field {where}{key!r}", f"{where}{key}")
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise SpecError(f"field {where}{key!r} must be a non-negative integer, got {v!r}", f"{where}{key}")
    return v


def spec_from_dict(data: dict) -> EquationSpec:
    if not isinstance(data, dict):
        raise SpecError("equation spec must be a JSON object")
    alpha = _number(data, "alpha", "")
    k = _number(data, "k", "")
    for key in ("terms", "rhs"):
        if key not in data:
            raise SpecError(f"missing field {key!r}", key)
        if not isinstance(data[key], list):
            raise SpecError(f"field {key!r} must be a list", key)
    terms = []
    for i, raw in enumerate(data["terms"]):
        where = f"terms[{i}]."
        if not isinstance(raw, dict):
            raise SpecError(f"{where[:-1]} must be an object", where[:-1])
        c = _number(raw, "c", where)
        s = _integer(raw, "s", where)
        kind = raw.get("kind")
        if not isinstance(kind, dict) or len(kind) != 1:
            raise SpecError(f"field {where}'kind' must be {{'power': n}} or {{'exp': lambda}}", where + "kind")
        if "power" in kind:
            terms.append(SourceTerm(c, s, Power(_integer(kind, "power", where + "kind."))))
        elif "exp" in kind:
            terms.append(SourceTerm(c, s, Exp(_number(kind, "exp", where + "kind."))))
        else:
            raise SpecError(f"unknown source kind {next(iter(kind))!r}", where + "kind")
    rhs = []
    for j, r in enumerate(data["rhs"]):
        if isinstance(r, bool) or not isinstance(r, (int, float)):
            raise SpecError(f"rhs[{j}] must be a number, got {r!r}", f"rhs[{j}]")
        rhs.append(float(r))
    y0 = _number(data, "y0", "")
    dy0 = _number(data, "dy0", "")
    return EquationSpec(alpha, k, tuple(terms), tuple(rhs), y0, dy0)


def spec_from_json(text: str) -> EquationSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc
    return spec_from_dict(data)


# -- DSL --------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()=]))"
)


@dataclass
class _Tok:
    kind: str  # num | name | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


@dataclass
class _Parser:
    text: str
    toks: list[_Tok]
    i: int = 0
    k: float = 0.0
    terms: list[SourceTerm] = field(default_factory=list)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"{msg}, found {found}", tok.pos, self.text)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def number(self) -> float:
        if self.tok.kind != "num":
            raise self.error("expected a number")
        v = float(self.tok.text)
        self.i += 1
        return v

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "num" or not tok.text.isdigit():
            raise self.error("expected a non-negative integer")
        self.i += 1
        return int(tok.text)

    def sign(self) -> float | None:
        if self.at("+"):
            self.i += 1
            return 1.0
        if self.at("-"):
            self.i += 1
            return -1.0
        return None

    def x_power(self) -> int:
        # "x" or "x^j"; caller has seen the name x
        self.expect("x")
        if self.at("^"):
            self.i += 1
            return self.integer()
        return 1

    # equation := "D2y" (sign term)* "=" poly
    def equation(self) -> tuple[float, list[SourceTerm], list[float]]:
        self.expect("D2y")
        while not self.at("="):
            sgn = self.sign()
            if sgn is None:
                raise self.error("expected '+', '-' or '='")
            self.term(sgn)
        self.expect("=")
        rhs = self.poly()
        if self.tok.kind != "end":
            raise self.error("unexpected trailing input")
        return self.k, self.terms, rhs

    def term(self, sgn: float) -> None:
        if self.at("("):
            # drag := "(" number "/x" ")" "*" "Dy"
            self.i += 1
            coef = self.number()
            self.expect("/")
            self.expect("x")
            self.expect(")")
            self.expect("*")
            self.expect("Dy")
            self.k += sgn * coef
            return
        c = sgn
        s = 0
        if self.tok.kind == "num":
            c *= self.number()
            if not self.at("*"):
                # bare constant forcing on the left, e.g. "+ 1"
                self.terms.append(SourceTerm(c, 0, Power(0)))
                return
            self.expect("*")
        if self.at("x"):
            s = self.x_power()
            self.expect("*")
        self.terms.append(SourceTerm(c, s, self.func()))

    def func(self) -> SourceKind:
        tok = self.tok
        if self.at("y"):
            self.i += 1
            if self.at("^"):
                self.i += 1
                return Power(self.integer())
            return Power(1)
        if self.at("exp"):
            self.i += 1
            self.expect("(")
            lam = self.sign() or 1.0
            if self.tok.kind == "num":
                lam *= self.number()
                self.expect("*")
            self.expect("y")
            self.expect(")")
            return Exp(lam)
        if tok.kind == "num" and tok.text in ("1", "1.0"):
            self.i += 1
            return Power(0)
        if tok.kind == "name" and tok.text not in ("x", "Dy", "D2y"):
            raise UnsupportedTermError(f"unsupported function {tok.text!r}", tok.pos, self.text)
        raise self.error("expected 'y', 'y^n', 'exp(-y)' or '1'")

    # poly := number (sign [number "*"] "x^" integer | sign number)*
    def poly(self) -> list[float]:
        coeffs: dict[int, float] = {}
        sgn = self.sign() or 1.0
        while True:
            c = sgn
            if self.tok.kind == "num":
                c *= self.number()
                if self.at("*"):
                    self.i += 1
                    power = self.x_power()
                else:
                    power = 0
            elif self.at("x"):
                power = self.x_power()
            else:
                raise self.error("expected a number or a power of x")
            coeffs[power] = coeffs.get(power, 0.0) + c
            sgn = self.sign()
            if sgn is None:
                break
        top = max(coeffs)
        rhs = [coeffs.get(j, 0.0) for j in range(top + 1)]
        while rhs and rhs[-1] == 0.0:
            rhs.pop()
        return rhs


def parse_equation(text: str, alpha: float = 1.0, y0: float = 0.0, dy0: float = 0.0) -> EquationSpec:
    """Parse e.g. ``"D2y + (2/x)*Dy - exp(-y) = 0"``.

    Initial conditions and alpha are not part of the text.
    """
    parser = _Parser(text, _tokenize(text))
    k, terms, rhs = parser.equation()
    return EquationSpec(float(alpha), k, tuple(terms), tuple(rhs), float(y0), float(dy0))
