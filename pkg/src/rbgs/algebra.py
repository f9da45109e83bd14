"""Linear combinations of bracketed words over the rationals.

:class:`Element` is a sparse map word -> :class:`~fractions.Fraction` with no
zero coefficients.  Products are bilinear concatenation, :func:`apply_r`
wraps every word in one more R-bracket.

The second half of the module builds the three families of identities the
rewriting system is made of: the Lie-envelope expansion of ``(l+1) y x^l``,
the expanded Rota-Baxter product ``R(b_1)...R(b_t)`` and the long formula
``R(R(b_1)...R(b_{l-1}) b_l R(b_l)^k R(b_{l+k+1})) = ...`` whose right-hand
side is the replacement used by the long relations of the engine.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .terms import Letter, RBracket, StarContext, Word, render, sort_key, substitute

Scalar = Fraction
Coeff = Union[int, Fraction]


class ZeroElementError(ValueError):
    """Raised when the leading word of the zero element is requested."""


class Element:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Fraction]] = None):
        self.terms: Dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                if c:
                    self.terms[w] = Fraction(c)

    @classmethod
    def of(cls, w: Word, c: Coeff = 1) -> "Element":
        e = cls()
        if c:
            e.terms[w] = Fraction(c)
        return e

    @classmethod
    def letter(cls, x: Letter, c: Coeff = 1) -> "Element":
        return cls.of((x,), c)

    @classmethod
    def sum(cls, parts: Iterable["Element"]) -> "Element":
        out = cls()
        for p in parts:
            out.iadd(p)
        return out

    # -- linear structure --

    def iadd(self, other: "Element", c: Coeff = 1) -> "Element":
        """In-place ``self += c * other``."""
        if not c:
            return self
        t = self.terms
        for w, d in other.terms.items():
            v = t.get(w, 0) + c * d
            if v:
                t[w] = v
            else:
                t.pop(w, None)
        return self

    def add_term(self, w: Word, c: Coeff) -> None:
        if not c:
            return
        v = self.terms.get(w, 0) + c
        if v:
            self.terms[w] = v
        else:
            self.terms.pop(w, None)

    def copy(self) -> "Element":
        e = Element()
        e.terms = dict(self.terms)
        return e

    def __add__(self, other: "Element") -> "Element":
        return self.copy().iadd(other)

    def __sub__(self, other: "Element") -> "Element":
        return self.copy().iadd(other, -1)

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def scale(self, c: Coeff) -> "Element":
        if not c:
            return Element()
        e = Element()
        e.terms = {w: c * d for w, d in self.terms.items()}
        return e

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Word, Fraction]]:
        """Terms in descending monomial order."""
        for w in sorted(self.terms, key=sort_key, reverse=True):
            yield w, self.terms[w]

    def words(self) -> List[Word]:
        return [w for w, _ in self]

    def coefficient(self, w: Word) -> Fraction:
        return self.terms.get(w, Fraction(0))

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        return format_element(self, names)

    def __repr__(self) -> str:
        return f"Element({format_element(self)!r})"


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(e: Element, names: Optional[Sequence[str]] = None) -> str:
    if not e:
        return "0"
    parts = []
    for w, c in e:
        body = render(w, names)
        mag = abs(c)
        text = body if mag == 1 else f"{format_coefficient(mag)} {body}"
        if not parts:
            parts.append(text if c > 0 else f"-{text}")
        else:
            parts.append(("+ " if c > 0 else "- ") + text)
    return " ".join(parts)


def multiply(e1: Element, e2: Element) -> Element:
    out = Element()
    t = out.terms
    for u, c in e1.terms.items():
        for v, d in e2.terms.items():
            w = u + v
            val = t.get(w, 0) + c * d
            if val:
                t[w] = val
            else:
                del t[w]
    return out


def product(factors: Sequence[Element]) -> Element:
    if not factors:
        raise ValueError("empty product")
    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    return out


def apply_r(e: Element) -> Element:
    out = Element()
    out.terms = {(RBracket(w),): c for w, c in e.terms.items()}
    return out


def leading(e: Element) -> Tuple[Word, Fraction]:
    if not e:
        raise ZeroElementError("the zero element has no leading word")
    w = max(e.terms, key=sort_key)
    return w, e.terms[w]


def in_context(q: StarContext, e: Element) -> Element:
    """``q|_e``, extended linearly."""
    out = Element()
    for w, c in e.terms.items():
        out.add_term(substitute(q, w), c)
    return out


def power(e: Element, n: int) -> Optional[Element]:
    """``e^n``; ``None`` stands for the empty product when ``n == 0``."""
    if n == 0:
        return None
    return product([e] * n)


def _mul_opt(a: Optional[Element], b: Optional[Element]) -> Optional[Element]:
    if a is None:
        return b
    if b is None:
        return a
    return multiply(a, b)


# --- bracket helpers ---------------------------------------------------------

LetterBracket = Callable[[Letter, Letter], Element]


def bracket_elements(u: Element, v: Element, letter_bracket: LetterBracket) -> Element:
    """Bilinear extension of a bracket on letters to letter combinations."""
    out = Element()
    for w1, c in u.terms.items():
        for w2, d in v.terms.items():
            if len(w1) != 1 or len(w2) != 1 or type(w1[0]) is not Letter or type(w2[0]) is not Letter:
                raise ValueError("bracket arguments must be combinations of letters")
            out.iadd(letter_bracket(w1[0], w2[0]), c * d)
    return out


def commutator(u: Element, v: Element) -> Element:
    return multiply(u, v) - multiply(v, u)


def iterated(y: Element, x: Element, p: int, bracket: Callable[[Element, Element], Element]) -> Element:
    """``[y, x^{(p)}] = [[...[y, x], x]..., x]`` with ``p`` brackets."""
    out = y
    for _ in range(p):
        out = bracket(out, x)
    return out


# --- envelope expansion of (l+1) y x^l ---------------------------------------

def eq3_defect(y: Letter, x: Letter, l: int, oracle) -> Element:
    """LHS minus RHS of the expansion of ``(l+1) y x^l`` in ``U(L)``.

    Iterated brackets are expanded through ``oracle.bracket`` into letters; the
    result vanishes modulo the commutation relations alone.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    lb = oracle.bracket
    return _eq3(Element.letter(y), Element.letter(x), l,
                lambda a, b: bracket_elements(a, b, lb))


def eq3_defect_free(y: Element, x: Element, l: int) -> Element:
    """The same defect with brackets read as commutators ``ab - ba``; it is
    identically zero in the free associative algebra."""
    return _eq3(y, x, l, commutator)


def _eq3(y: Element, x: Element, l: int, br) -> Element:
    lhs = _mul_opt(y, power(x, l)).scale(l + 1)
    rhs = Element()
    for i in range(2, l + 2):
        term = _mul_opt(iterated(y, x, i - 1, br), power(x, l + 1 - i))
        rhs.iadd(term, (-1) ** i * comb(l + 1, i))
    for j in range(l + 1):
        rhs.iadd(_mul_opt(_mul_opt(power(x, j), y), power(x, l - j)))
    return lhs - rhs


# --- expanded product of R-letters ---------------------------------------------

def hat_expansion(unhatted: Sequence[Element], hatted: Sequence[Element]) -> List[Element]:
    """Coefficients of ``prod_p (U_p + mu H_p)`` as a polynomial in ``mu``.

    Entry ``m`` is the sum over all position sets of size ``m`` of the product
    with those positions hatted.
    """
    poly: List[Element] = [unhatted[0], hatted[0]]
    for u, h in zip(unhatted[1:], hatted[1:]):
        nxt = [Element() for _ in range(len(poly) + 1)]
        for m, e in enumerate(poly):
            if e:
                nxt[m].iadd(multiply(e, u))
                nxt[m + 1].iadd(multiply(e, h))
        poly = nxt
    return poly


def eq4_element(bs: Sequence[Element], lam: Coeff) -> Element:
    """``R(b_1)...R(b_t) - R(sum over nonempty hat sets H of lam^(|H|-1) ...)``.

    Vanishes modulo the Rota-Baxter relations alone.
    """
    if not bs:
        raise ValueError("need at least one b")
    lam = Fraction(lam)
    unhatted = [apply_r(b) for b in bs]
    poly = hat_expansion(unhatted, list(bs))
    inner = Element()
    for m in range(1, len(poly)):
        inner.iadd(poly[m], lam ** (m - 1))
    return poly[0] - apply_r(inner)


# --- the long formula ------------------------------------------------------------

def long_rhs(prefix: Sequence[Tuple[Element, Element]],
             block: Tuple[Element, Element],
             k: int,
             suffix: Sequence[Tuple[Element, Element]],
             lam: Coeff,
             block_bracket: Callable[[int], Element]) -> Element:
    """Right-hand side of the long formula for general positions.

    Each position is a pair ``(U, H)``: ``U`` is the factor standing for
    ``R(b_p)`` and ``H`` the hatted factor ``b_p``.  ``block`` is the repeated
    ``b_l``; it occupies ``k + 1`` positions.  ``block_bracket(p)`` must return
    ``[b_l, R(b_l)^{(p)}]``.  ``prefix`` and ``suffix`` may be empty (absent
    flanks simply contribute no positions).
    """
    lam = Fraction(lam)
    u_l, _h_l = block
    positions = list(prefix) + [block] * (k + 1) + list(suffix)
    unhatted = [p[0] for p in positions]
    hatted = [p[1] for p in positions]
    first = len(prefix)
    block_idx = range(first, first + k + 1)

    pre = product([p[0] for p in prefix]) if prefix else None
    suf = product([p[0] for p in suffix]) if suffix else None

    main = product(unhatted)

    sigma = Element()
    for i in range(2, k + 2):
        mid = _mul_opt(block_bracket(i - 1), power(u_l, k + 1 - i))
        sigma.iadd(_mul_opt(_mul_opt(pre, mid), suf), (-1) ** i * comb(k + 1, i))
    for p in range(len(positions)):
        if p in block_idx:
            continue
        factors = [hatted[q] if q == p else unhatted[q] for q in range(len(positions))]
        sigma.iadd(product(factors), -1)
    if lam and len(positions) > 1:
        poly = hat_expansion(unhatted, hatted)
        for m in range(2, len(poly)):
            sigma.iadd(poly[m], -(lam ** (m - 1)))

    out = main.scale(Fraction(1, k + 1))
    out.iadd(apply_r(sigma), Fraction(1, k + 1))
    return out


def long_lhs(prefix: Sequence[Tuple[Element, Element]],
             block: Tuple[Element, Element],
             k: int,
             suffix: Sequence[Tuple[Element, Element]]) -> Element:
    """``R(R(b_1)...R(b_{l-1}) b_l R(b_l)^k R(b_{l+k+1}))`` for general positions."""
    u_l, h_l = block
    factors = [p[0] for p in prefix] + [h_l] + [u_l] * k + [p[0] for p in suffix]
    return apply_r(product(factors))


def letter_position(x: Letter) -> Tuple[Element, Element]:
    """A letter of level >= 1 read as ``R(x~)``: unhatted ``x``, hatted ``x~``."""
    return Element.letter(x), Element.letter(x.tilde)


def bracket_position(z: Element) -> Tuple[Element, Element]:
    return apply_r(z), z


def eq5_delta(z1: Optional[Element],
              vecs: Sequence[Sequence[Letter]],
              zs: Sequence[Element],
              beta: Letter,
              k: int,
              zlast: Optional[Element],
              lam: Coeff,
              oracle) -> Element:
    """Replacement ``Delta`` for ``R(R(z_1) v_1 R(z_2) ... R(z_s) v_s x x'^k R(z_{s+1}))``.

    ``vecs`` holds ``s`` letter words of levels >= 1 (only the last may be
    empty), ``zs`` the ``s - 1`` interior contents, ``beta = x_{b,r}`` and the
    ``k`` trailing letters are ``x_{b,r+1}``.  Letters of the vectors and of
    the block stand for ``R`` of their level-predecessors.
    """
    if len(zs) != len(vecs) - 1:
        raise ValueError("need exactly one interior content between consecutive vectors")
    prefix: List[Tuple[Element, Element]] = []
    if z1 is not None:
        prefix.append(bracket_position(z1))
    for i, vec in enumerate(vecs):
        if i > 0:
            prefix.append(bracket_position(zs[i - 1]))
        for x in vec:
            if x.level < 1:
                raise ValueError(f"vector letter {x} must have level >= 1")
            prefix.append(letter_position(x))
    block = (Element.letter(beta.shifted()), Element.letter(beta))
    suffix = [bracket_position(zlast)] if zlast is not None else []
    lb = oracle.bracket
    y, xr = Element.letter(beta), Element.letter(beta.shifted())

    def block_bracket(p: int) -> Element:
        return iterated(y, xr, p, lambda a, b: bracket_elements(a, b, lb))

    return long_rhs(prefix, block, k, suffix, lam, block_bracket)


def free_long_identity(prefix_b: Sequence[Element], b_l: Element, k: int,
                       suffix_b: Sequence[Element], lam: Coeff) -> Element:
    """LHS minus RHS of the long formula with every ``R(b_p)`` a genuine
    R-letter and brackets read as commutators.  It is a consequence of the
    Rota-Baxter identity alone, so it vanishes modulo the RB relations."""
    prefix = [bracket_position(b) for b in prefix_b]
    suffix = [bracket_position(b) for b in suffix_b]
    block = bracket_position(b_l)
    rb_l = apply_r(b_l)

    def block_bracket(p: int) -> Element:
        return iterated(b_l, rb_l, p, commutator)

    return long_lhs(prefix, block, k, suffix) - long_rhs(prefix, block, k, suffix, lam, block_bracket)
