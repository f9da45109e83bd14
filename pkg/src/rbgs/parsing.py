"""Text formats: the expression grammar and presentation files.

Expressions::

    expr   := sign? term (("+" | "-") term)*
    term   := factor+                      (juxtaposition is the product)
    factor := rational | name | "P^k(" name ")" | "P(" name ")"
            | "R(" expr ")" | "(" expr ")"

``P`` and ``R`` are reserved.  Whitespace is insignificant.

Presentation files are line based; ``#`` starts a comment::

    case = post
    weight = 1
    generators = a, b
    [product]
    a a = a
    [bracket]
    a b = b
    [oracle]
    higher = error
    [oracle.table]
    P^2(a) b = 0
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Element, apply_r, multiply
from .presentation import (BracketOracle, POLICIES, PrePostLie, PresentationError, forced_oracle,
                           validate)
from .terms import Letter

RESERVED = {"P", "R"}
NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_TOKEN = re.compile(rf"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<pow>P\^\d+\()|(?P<p1>P\()|(?P<r>R\()"
                    rf"|(?P<name>{NAME})|(?P<op>[-+()]))")


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# --- expressions ------------------------------------------------------------------

def _tokens(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at column {pos + 1}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokens(text)
        self.i = 0
        self.index = {n: i for i, n in enumerate(names)}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, -1)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}" + (f" at column {pos + 1}" if pos >= 0 else " at end"))

    def parse(self) -> Element:
        if not self.toks:
            raise ParseError("empty expression")
        e = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"unexpected {self.peek()[1]!r} at column {self.peek()[2] + 1}")
        return e

    def expr(self) -> Element:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term().scale(sign)
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            out = out + self.term().scale(sign)
        return out

    def term(self) -> Element:
        coeff = Fraction(1)
        factors: List[Element] = []
        while True:
            kind, v, pos = self.peek()
            if kind is None or v in ("+", "-", ")"):
                break
            if kind == "num":
                self.take()
                coeff *= Fraction(v)
            else:
                factors.append(self.factor())
        if not factors:
            if self.i > 0 and self.toks[self.i - 1][0] == "num":
                raise ParseError("a bare number is not an element of the algebra (words are nonempty)")
            raise ParseError("expected a term" + (f" at column {self.peek()[2] + 1}" if self.peek()[2] >= 0 else " at end"))
        out = factors[0]
        for f in factors[1:]:
            out = multiply(out, f)
        return out.scale(coeff)

    def gen(self) -> int:
        kind, v, pos = self.take()
        if kind != "name":
            raise ParseError("expected a generator name")
        if v not in self.index:
            raise ParseError(f"unknown generator {v!r}")
        return self.index[v]

    def factor(self) -> Element:
        kind, v, pos = self.take()
        if kind == "name":
            if v in RESERVED:
                raise ParseError(f"{v!r} is reserved; write {v}(...)")
            if v not in self.index:
                raise ParseError(f"unknown generator {v!r} at column {pos + 1}")
            return Element.letter(Letter(self.index[v], 0))
        if kind in ("pow", "p1"):
            level = int(v[2:-1]) if kind == "pow" else 1
            g = self.gen()
            self.expect(")")
            return Element.letter(Letter(g, level))
        if kind == "r":
            inner = self.expr()
            self.expect(")")
            return apply_r(inner)
        if v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {v!r}" + (f" at column {pos + 1}" if pos >= 0 else " at end"))


def parse_expr(text: str, names: Sequence[str]) -> Element:
    return _Parser(text, names).parse()


def parse_letter_combination(text: str, names: Sequence[str], level0: bool = True) -> Element:
    e = parse_expr(text, names) if text.strip() not in ("0", "") else Element()
    for w in e.terms:
        if len(w) != 1 or type(w[0]) is not Letter or (level0 and w[0].level != 0):
            raise ParseError(f"{text.strip()!r} is not a combination of {'generators' if level0 else 'letters'}")
    return e


# --- presentation files --------------------------------------------------------------

@dataclass
class Presentation:
    algebra: PrePostLie
    oracle: BracketOracle
    policy: str
    table: Dict[Tuple[Letter, Letter], Element] = field(default_factory=dict)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.algebra.gens


TOP_KEYS = ("case", "weight", "generators")
SECTIONS = ("product", "bracket", "oracle", "oracle.table")


def parse_presentation(text: str, validate_bound: int = 1) -> Presentation:
    top: Dict[str, str] = {}
    tables: Dict[str, List[Tuple[int, str, str]]] = {"product": [], "bracket": [], "oracle.table": []}
    oracle_opts: Dict[str, str] = {}
    section = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or line[1:-1].strip() not in SECTIONS:
                raise ParseError(f"unknown section {line}", n)
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", n)
        key, value = (s.strip() for s in line.split("=", 1))
        if section is None:
            if key not in TOP_KEYS:
                raise ParseError(f"unknown key {key!r}", n)
            if key in top:
                raise ParseError(f"duplicate key {key!r}", n)
            top[key] = value
        elif section == "oracle":
            if key != "higher":
                raise ParseError(f"unknown oracle key {key!r}", n)
            oracle_opts[key] = value
        else:
            tables[section].append((n, key, value))
    for key in TOP_KEYS:
        if key not in top:
            raise ParseError(f"missing key {key!r}")
    gens = tuple(g for g in re.split(r"[,\s]+", top["generators"]) if g)
    if not gens:
        raise ParseError("no generators")
    for g in gens:
        if not re.fullmatch(NAME, g) or g in RESERVED:
            raise ParseError(f"invalid generator name {g!r}")
    if len(set(gens)) != len(gens):
        raise ParseError("duplicate generator names")
    try:
        weight = Fraction(top["weight"])
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"invalid weight {top['weight']!r}") from None
    case = top["case"]
    idx = {g: i for i, g in enumerate(gens)}

    def pair_table(entries):
        out: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for n, key, value in entries:
            parts = key.split()
            if len(parts) != 2 or any(p not in idx for p in parts):
                raise ParseError(f"expected two generator names, got {key!r}", n)
            try:
                e = parse_letter_combination(value, gens)
            except ParseError as exc:
                raise ParseError(str(exc), n) from None
            k = (idx[parts[0]], idx[parts[1]])
            if k in out:
                raise ParseError(f"duplicate entry {key!r}", n)
            out[k] = {w[0].gen: c for w, c in e.terms.items()}
        return out

    product = pair_table(tables["product"])
    bracket = pair_table(tables["bracket"])
    if case == "post":
        # the bracket table may list one orientation only
        for (i, j), v in list(bracket.items()):
            if (j, i) not in bracket:
                bracket[(j, i)] = {g: -c for g, c in v.items()}
    algebra = PrePostLie(case, gens, weight, product, bracket).check()

    table: Dict[Tuple[Letter, Letter], Element] = {}
    for n, key, value in tables["oracle.table"]:
        try:
            lhs = parse_expr(key, gens)
            (w, c), = lhs.terms.items()
            if c != 1 or len(w) != 2 or any(type(x) is not Letter for x in w):
                raise ParseError("expected two letters")
            rhs = parse_letter_combination(value, gens, level0=False)
        except (ParseError, ValueError) as exc:
            raise ParseError(f"bad oracle table entry: {exc}", n) from None
        table[(w[0], w[1])] = rhs
    policy = oracle_opts.get("higher")
    if policy is not None and policy not in POLICIES:
        raise ParseError(f"unknown higher-bracket policy {policy!r}")
    if policy is None and table:
        policy = "table"
    oracle = forced_oracle(algebra, policy, table)
    rep = validate(oracle, validate_bound)
    if not rep.ok:
        raise PresentationError(f"bracket oracle fails validation: {rep.violations[0]}")
    return Presentation(algebra, oracle, oracle.policy, table)


def default_presentation() -> Presentation:
    return parse_presentation("case = pre\nweight = 0\ngenerators = y\n")
