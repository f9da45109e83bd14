"""PBW bases of universal enveloping pre- and postassociative algebras.

An E-word is built from generators ``y`` (level-0 letters) and their images
``P(y)`` (level-1 letters) as

    R(q_0)? w_1 R(q_1) w_2 ... R(q_{s-1}) w_s R(q_s)?

where every ``w_i`` is a nonempty weakly increasing word (a Com-word), and
every ``q_i`` is itself an E-word of degree at least 2 whose rendering is not
reducible by a long relation.  The post case asks for at least one level-0
letter among the ``w_i``; the pre case for exactly one level-0 letter in all
of them together.  The degree is the number of letters through every nesting.

The excluded contents (the exception form) are exactly those of shape
``R(q_1) u_1 R(q_2) ... R(q_t) u_t y P(y)^k R(q_{t+1})`` where all ``u_i`` use
level-1 letters only and ``y`` is greater than every letter of ``u_t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Element
from .enveloping import Envelope
from .presentation import OracleIncomplete, Report
from .terms import Letter, RBracket, Word, render, sort_key

CASES = ("pre", "post")


@dataclass(frozen=True)
class EWord:
    lead: Optional["EWord"]
    segments: Tuple[Tuple[Letter, ...], ...]
    mids: Tuple["EWord", ...]
    trail: Optional["EWord"]

    @property
    def word(self) -> Word:
        return _render_e(self)

    @property
    def degree(self) -> int:
        d = sum(len(s) for s in self.segments) + sum(m.degree for m in self.mids)
        for z in (self.lead, self.trail):
            if z is not None:
                d += z.degree
        return d

    def text(self, names: Optional[Sequence[str]] = None) -> str:
        return render(self.word, names)

    def to_dict(self, names: Optional[Sequence[str]] = None) -> dict:
        return {
            "word": self.text(names),
            "degree": self.degree,
            "lead": None if self.lead is None else self.lead.to_dict(names),
            "segments": [render(s, names) for s in self.segments],
            "mids": [m.to_dict(names) for m in self.mids],
            "trail": None if self.trail is None else self.trail.to_dict(names),
        }


@lru_cache(maxsize=None)
def _render_e(e: EWord) -> Word:
    out: list = []
    if e.lead is not None:
        out.append(RBracket(e.lead.word))
    for i, seg in enumerate(e.segments):
        if i:
            out.append(RBracket(e.mids[i - 1].word))
        out.extend(seg)
    if e.trail is not None:
        out.append(RBracket(e.trail.word))
    return tuple(out)


def alphabet(n_gens: int) -> List[Letter]:
    return sorted(Letter(g, k) for g in range(n_gens) for k in (0, 1))


def com_words(letters: Sequence[Letter], length: int) -> List[Tuple[Letter, ...]]:
    """Weakly increasing words of the given length, lexicographically ordered."""
    if length < 1:
        raise ValueError("length must be positive")
    return list(itertools.combinations_with_replacement(sorted(letters), length))


def _level0(seg: Sequence[Letter]) -> int:
    return sum(1 for x in seg if x.level == 0)


def is_exception(e: EWord) -> bool:
    """Whether ``R(e)`` matches the exception form."""
    if any(_level0(s) for s in e.segments[:-1]):
        return False
    last = e.segments[-1]
    zeros = [i for i, x in enumerate(last) if x.level == 0]
    if len(zeros) != 1:
        return False
    i = zeros[0]
    y = last[i]
    if any(x != y.shifted() for x in last[i + 1:]):
        return False
    return all(x < y for x in last[:i])


# --- enumeration ---------------------------------------------------------------

def enumerate_e(case: str, n_gens: int, degree: int) -> List[EWord]:
    """All E-words of exactly ``degree``, ordered by canonical text."""
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}")
    if degree < 1:
        raise ValueError("degree must be positive")
    words = _e_words(case, n_gens, degree)
    return sorted(words, key=lambda e: render(e.word))


@lru_cache(maxsize=None)
def _e_words(case: str, n_gens: int, degree: int) -> Tuple[EWord, ...]:
    out = []
    for lead_deg in [0] + list(range(2, degree)):
        leads = [None] if lead_deg == 0 else _contents(case, n_gens, lead_deg)
        for lead in leads:
            for body in _bodies(case, n_gens, degree - lead_deg):
                segs, mids, trail, zeros = body
                if case == "pre" and zeros != 1 or case == "post" and zeros < 1:
                    continue
                out.append(EWord(lead, segs, mids, trail))
    return tuple(out)


@lru_cache(maxsize=None)
def _contents(case: str, n_gens: int, degree: int) -> Tuple[EWord, ...]:
    """Admissible R-contents of the given degree."""
    if degree < 2:
        return ()
    return tuple(e for e in _e_words(case, n_gens, degree) if not is_exception(e))


@lru_cache(maxsize=None)
def _segments(n_gens: int, length: int) -> Tuple[Tuple[Letter, ...], ...]:
    return tuple(com_words(alphabet(n_gens), length))


@lru_cache(maxsize=None)
def _bodies(case: str, n_gens: int, degree: int) -> Tuple[tuple, ...]:
    """``w_1 R(q_1) ... w_s R(q_s)?`` of the given degree as
    ``(segments, mids, trail, level-0 count)``."""
    out = []
    for first in range(1, degree + 1):
        for seg in _segments(n_gens, first):
            z = _level0(seg)
            if case == "pre" and z > 1:
                continue
            rest = degree - first
            if rest == 0:
                out.append(((seg,), (), None, z))
                continue
            for trail in _contents(case, n_gens, rest):
                out.append(((seg,), (), trail, z))
            for mid_deg in range(2, rest):
                for mid in _contents(case, n_gens, mid_deg):
                    for segs, mids, trail, z2 in _bodies(case, n_gens, rest - mid_deg):
                        if case == "pre" and z + z2 > 1:
                            continue
                        out.append(((seg,) + segs, (mid,) + mids, trail, z + z2))
    return tuple(out)


def hilbert_counts(case: str, n_gens: int, max_degree: int) -> List[int]:
    return [len(_e_words(case, n_gens, d)) for d in range(1, max_degree + 1)]


# --- membership ---------------------------------------------------------------

def parse_e(w: Word, case: str) -> Tuple[Optional[EWord], str]:
    """Split ``w`` into E-word structure; returns ``(e, "")`` or ``(None, reason)``."""
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}")
    for i, a in enumerate(w):
        if type(a) is Letter and a.level > 1:
            return None, "letters must be generators or their images under P"
        if type(a) is RBracket and i + 1 < len(w) and type(w[i + 1]) is RBracket:
            return None, "adjacent R-letters"
    items: list = []
    for a in w:
        if type(a) is Letter:
            if not items or not isinstance(items[-1], list):
                items.append([])
            items[-1].append(a)
            continue
        c = a.content
        if len(c) == 1 and type(c[0]) is Letter:
            return None, "R of a single letter (write P(y))"
        sub, why = parse_e(c, case)
        if sub is None:
            return None, f"content {render(c)}: {why}"
        if is_exception(sub):
            return None, f"content {render(c)} has the exception form"
        items.append(sub)
    lead = items.pop(0) if isinstance(items[0], EWord) else None
    trail = items.pop() if items and isinstance(items[-1], EWord) else None
    if not items:
        return None, "no letter segment"
    segs = [tuple(x) for x in items[0::2]]
    mids = tuple(items[1::2])
    for seg in segs:
        if list(seg) != sorted(seg):
            return None, "segment is not weakly increasing"
    zeros = sum(_level0(seg) for seg in segs)
    if case == "post" and zeros < 1:
        return None, "condition 1: no generator letter in any segment"
    if case == "pre" and zeros != 1:
        return None, "condition 1: the segments must hold exactly one generator letter"
    return EWord(lead, tuple(segs), mids, trail), ""


def is_in_e(w: Word, case: str) -> Tuple[bool, str]:
    e, why = parse_e(w, case)
    return e is not None, why or "ok"


# --- closure and dimensions ---------------------------------------------------------

def rank(vectors: Sequence[Element]) -> int:
    """Rank of a family of elements over the rationals."""
    return len(independent(vectors))


def independent(vectors: Sequence[Element]) -> List[Element]:
    """A maximal linearly independent subfamily, in input order."""
    elim = Eliminator()
    return [e for e in vectors if elim.add(e)]


class Eliminator:
    """Incremental sparse Gaussian elimination keyed by leading words."""

    def __init__(self):
        self.pivots: Dict[Word, Dict[Word, Fraction]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def add(self, e: Element) -> bool:
        """Insert ``e``; returns whether it was independent of what came before."""
        v = dict(e.terms)
        while v:
            w = max(v, key=sort_key)
            piv = self.pivots.get(w)
            if piv is None:
                inv = 1 / v[w]
                self.pivots[w] = {u: c * inv for u, c in v.items()}
                return True
            f = v[w]
            for u, c in piv.items():
                val = v.get(u, 0) - f * c
                if val:
                    v[u] = val
                else:
                    v.pop(u, None)
        return False


def closure_report(env: Envelope, case: str, n_gens: int, max_degree: int,
                   names: Optional[Sequence[str]] = None) -> Report:
    """Closure of rendered E under the operations and dimensions by degree.

    ``V_n``, the span of all operation monomials of degree ``n``, is built as
    the span of ``op(V_i, V_j)`` with ``i + j = n``.  The rank of
    ``V_1 + ... + V_n`` must equal the number of E-words of degree at most
    ``n``, with support inside them.  In addition every product
    ``op(e1, e2)`` of E-words with degree sum at most ``max_degree`` must land
    in the span of rendered E.
    """
    rep = Report("closure")
    e_by_deg = {d: enumerate_e(case, n_gens, d) for d in range(1, max_degree + 1)}
    rendered = {d: {e.word for e in es} for d, es in e_by_deg.items()}
    all_rendered = set().union(*rendered.values())
    dims: Dict[int, dict] = {}
    ops = [("succ", env.succ), ("prec", env.prec)] + ([("dot", env.dot)] if env.weight else [])

    # E-words must be irreducible and hence their own normal forms
    for d, es in e_by_deg.items():
        for e in es:
            if not env.system.is_irreducible(e.word):
                rep.fail(kind="reducible", word=e.text(names))

    for d1 in range(1, max_degree):
        for d2 in range(1, max_degree - d1 + 1):
            for e1, e2 in itertools.product(e_by_deg[d1], e_by_deg[d2]):
                a, b = Element.of(e1.word), Element.of(e2.word)
                for name, op in ops:
                    rep.checked += 1
                    try:
                        res = op(a, b)
                    except OracleIncomplete as exc:
                        rep.incomplete.append(str(exc))
                        continue
                    bad = [w for w in res.terms if w not in all_rendered]
                    if bad:
                        rep.fail(kind="closure", op=name, args=[e1.text(names), e2.text(names)],
                                 outside=[render(w, names) for w in bad[:3]])

    # U(C) is filtered by degree (the dot and nontrivial products may lower
    # it), so ranks are compared on the cumulative spans V_1 + ... + V_n
    total = Eliminator()
    allowed: set = set()
    spans: Dict[int, List[Element]] = {}
    for n in range(1, max_degree + 1):
        if n == 1:
            gens = [Element.letter(Letter(g)) for g in range(n_gens)]
        else:
            gens = []
            for i in range(1, n):
                for a, b in itertools.product(spans[i], spans[n - i]):
                    for _, op in ops:
                        try:
                            gens.append(op(a, b))
                        except OracleIncomplete as exc:
                            rep.incomplete.append(str(exc))
        spans[n] = independent([g for g in gens if g])
        for g in spans[n]:
            total.add(g)
        allowed |= rendered[n]
        count = sum(len(e_by_deg[d]) for d in range(1, n + 1))
        outside = sorted({w for v in spans[n] for w in v.terms if w not in allowed}, key=sort_key)
        dims[n] = {"rank": len(total), "count": count, "new": len(e_by_deg[n])}
        if len(total) != count:
            rep.fail(kind="dimension", degree=n, rank=len(total), count=count)
        if outside:
            rep.fail(kind="span-support", degree=n, outside=[render(w, names) for w in outside[:3]])
    rep.incomplete = sorted(set(rep.incomplete))
    rep.extra["dimensions"] = dims
    return rep
