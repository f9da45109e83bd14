"""The quotient algebra: normal-form arithmetic, induced operations, checks.

Elements of the quotient are plain :class:`~rbgs.algebra.Element` values all
of whose words are irreducible.  :class:`Envelope` wraps a
:class:`~rbgs.engine.RewriteSystem` and provides the associative product, the
operator, and the operations ``a > b = R(a)b``, ``a < b = aR(b)`` and
``a . b = weight ab`` (written ``succ``, ``prec`` and ``dot``).
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, List, Sequence

from .algebra import Element, apply_r, multiply
from .engine import RewriteSystem
from .presentation import OracleIncomplete, PrePostLie, Report, basis, letters_of
from .terms import Letter, RBracket, Word


class Envelope:
    def __init__(self, system: RewriteSystem):
        self.system = system
        self.weight = system.weight

    @property
    def names(self):
        return self.system.oracle.names

    def nf(self, e: Element) -> Element:
        return self.system.normal_form(e)

    def letter(self, gen: int, level: int = 0) -> Element:
        return self.nf(Element.letter(Letter(gen, level)))

    def product(self, a: Element, b: Element) -> Element:
        return self.nf(multiply(a, b))

    def r(self, a: Element) -> Element:
        return self.nf(apply_r(a))

    def succ(self, a: Element, b: Element) -> Element:
        return self.product(self.r(a), b)

    def prec(self, a: Element, b: Element) -> Element:
        return self.product(a, self.r(b))

    def dot(self, a: Element, b: Element) -> Element:
        if not self.weight:
            raise ValueError("the dot operation exists only for nonzero weight")
        return self.product(a, b).scale(self.weight)

    def operations(self) -> List[Callable[[Element, Element], Element]]:
        ops = [self.succ, self.prec]
        if self.weight:
            ops.append(self.dot)
        return ops


def envelope_for(c: PrePostLie, oracle, **options) -> Envelope:
    return Envelope(RewriteSystem(oracle, c.weight, **options))


# --- sampling ----------------------------------------------------------------

def random_word(rng: random.Random, n_gens: int, max_size: int, max_level: int = 1,
                max_rdeg: int = 2) -> Word:
    """A random word of size at most ``max_size`` (letters count 1, brackets 1)."""
    budget = rng.randint(1, max_size)
    return _rand_word(rng, n_gens, budget, max_level, max_rdeg)


def _rand_word(rng, n_gens, budget, max_level, rdeg) -> Word:
    out = []
    while budget > 0:
        if rdeg > 0 and budget >= 2 and rng.random() < 0.35:
            inner = rng.randint(1, budget - 1)
            content = _rand_word(rng, n_gens, inner, max_level, rdeg - 1)
            rdeg -= 1 + _count_r(content)
            out.append(RBracket(content))
            budget -= 1 + inner
        else:
            out.append(Letter(rng.randrange(n_gens), rng.randint(0, max_level)))
            budget -= 1
    return tuple(out)


def _count_r(w: Word) -> int:
    return sum(1 + _count_r(a.content) for a in w if type(a) is RBracket)


def random_element(rng: random.Random, n_gens: int, terms: int = 2, max_size: int = 3,
                   max_level: int = 1, max_rdeg: int = 1) -> Element:
    e = Element()
    for _ in range(rng.randint(1, terms)):
        e.add_term(random_word(rng, n_gens, max_size, max_level, max_rdeg), rng.choice((1, -1, 2)))
    return e


def random_monomial(env: Envelope, rng: random.Random, degree: int, n_gens: int) -> Element:
    """A random operation monomial of the given degree in the generators."""
    if degree == 1:
        return env.letter(rng.randrange(n_gens))
    left = rng.randint(1, degree - 1)
    op = rng.choice(env.operations())
    return op(random_monomial(env, rng, left, n_gens), random_monomial(env, rng, degree - left, n_gens))


# --- checks -------------------------------------------------------------------

def check_envelope(c: PrePostLie, env: Envelope) -> Report:
    """The image of ``C`` satisfies ``a.b = R(a)b - bR(a)`` (and, post case,
    ``[a, b]_C = weight (ab - ba)``) inside the quotient."""
    rep = Report("envelope")
    n = c.dim
    for a, b in itertools.product(range(n), repeat=2):
        rep.checked += 1
        A, B = Element.letter(Letter(a)), Element.letter(Letter(b))
        try:
            lhs = env.nf(multiply(apply_r(A), B) - multiply(B, apply_r(A)))
            want = letters_of(c.mul(basis(a), basis(b)))
            if lhs != want:
                rep.fail(kind="product", pair=[c.gens[a], c.gens[b]],
                         got=lhs.to_text(c.gens), expected=want.to_text(c.gens))
            if c.case == "post":
                br = env.nf(multiply(A, B) - multiply(B, A)).scale(c.weight)
                want = letters_of(c.br(basis(a), basis(b)))
                if br != want:
                    rep.fail(kind="bracket", pair=[c.gens[a], c.gens[b]],
                             got=br.to_text(c.gens), expected=want.to_text(c.gens))
        except OracleIncomplete as exc:
            rep.incomplete.append(str(exc))
    return rep


def dendriform_defects(env: Envelope, x: Element, y: Element, z: Element) -> List[Element]:
    s, p = env.succ, env.prec
    return [
        s(s(x, y) + p(x, y), z) - s(x, s(y, z)),
        p(s(x, y), z) - s(x, p(y, z)),
        p(p(x, y), z) - p(x, p(y, z) + s(y, z)),
    ]


def rb_defect(env: Envelope, a: Element, b: Element) -> Element:
    inner = multiply(env.r(a), b) + multiply(a, env.r(b))
    if env.weight:
        inner.iadd(multiply(a, b), env.weight)
    return env.product(env.r(a), env.r(b)) - env.r(env.nf(inner))


def assoc_defect(env: Envelope, a: Element, b: Element, c: Element) -> Element:
    return env.product(env.product(a, b), c) - env.product(a, env.product(b, c))


def check_axioms(env: Envelope, kind: str, samples: Sequence[Element], trials: int,
                 rng: random.Random) -> Report:
    """Evaluate ``dendriform``, ``rb`` or ``assoc`` on random tuples of samples."""
    if kind not in ("dendriform", "rb", "assoc"):
        raise ValueError(f"unknown axiom family {kind!r}")
    rep = Report(kind)
    names = env.names
    for _ in range(trials):
        rep.checked += 1
        try:
            if kind == "rb":
                a, b = rng.choice(samples), rng.choice(samples)
                d = rb_defect(env, a, b)
                if d:
                    rep.fail(args=[a.to_text(names), b.to_text(names)], defect=d.to_text(names))
                continue
            a, b, c = (rng.choice(samples) for _ in range(3))
            defects = dendriform_defects(env, a, b, c) if kind == "dendriform" else [assoc_defect(env, a, b, c)]
            for i, d in enumerate(defects, 1):
                if d:
                    rep.fail(identity=i, args=[e.to_text(names) for e in (a, b, c)], defect=d.to_text(names))
        except OracleIncomplete as exc:
            rep.incomplete.append(str(exc))
    rep.incomplete = sorted(set(rep.incomplete))
    return rep


def letters_distinct(env: Envelope, n_gens: int, max_level: int) -> bool:
    """Letters up to ``max_level`` stay irreducible and pairwise distinct."""
    seen = set()
    for g in range(n_gens):
        for k in range(max_level + 1):
            x = Letter(g, k)
            e = env.nf(Element.letter(x))
            if e != Element.letter(x):
                return False
            seen.add(x)
    return len(seen) == n_gens * (max_level + 1)
