"""Rewriting with the three relation families and composition checking.

The rewriting system for the universal enveloping associative RB-algebra of
a Lie RB-algebra ``L`` consists of

* ``comm``: ``xy - yx - [x, y]`` for letters ``x > y``;
* ``rb``:   ``R(a)R(b) - R(R(a)b + aR(b) + weight ab)``;
* ``long``: ``R(w) - Delta`` for every R-letter ``R(w)`` whose content parses
  as ``R(z_1) v_1 R(z_2) ... R(z_s) v_s x_{b,r} x_{b,r+1}^k R(z_{s+1})`` (see
  :func:`match9_all`); the single-letter case reads ``R(x_{b,r}) - x_{b,r+1}``.

A content ``z`` standing under an ``R`` in a long pattern must not be a single
letter (``R`` of a letter is itself reducible).  ``literal_z=True`` instead
demands at least one ``R`` inside ``z``; that variant is kept only to show
that it leaves non-trivial compositions.

A content can admit two long decompositions (``... x x' ...`` read either as
``x_{b,r} x_{b,r+1}`` or with ``x'`` alone as the distinguished letter).  The
system keeps one relation per leading word, the maximal-``k`` one;
``all_decompositions=True`` adds the other, whose difference with the
canonical relation is in general not reducible to 0.
"""

from __future__ import annotations

import heapq
import itertools
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from .algebra import Element, apply_r, eq5_delta, in_context, leading, multiply
from .presentation import BracketOracle
from .terms import HOLE, Letter, RBracket, StarContext, Word, context_at, deg_r, render, sort_key

KINDS = ("comm", "rb", "long")

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class Pattern9(NamedTuple):
    z1: Optional[Word]
    vecs: Tuple[Tuple[Letter, ...], ...]
    zs: Tuple[Word, ...]
    beta: Letter
    k: int
    zlast: Optional[Word]

    @property
    def degenerate(self) -> bool:
        return (self.z1 is None and self.zlast is None and not self.zs
                and self.vecs == ((),) and self.k == 0)

    def content(self) -> Word:
        out: list = []
        if self.z1 is not None:
            out.append(RBracket(self.z1))
        for i, v in enumerate(self.vecs):
            if i:
                out.append(RBracket(self.zs[i - 1]))
            out.extend(v)
        out.append(self.beta)
        out.extend([self.beta.shifted()] * self.k)
        if self.zlast is not None:
            out.append(RBracket(self.zlast))
        return tuple(out)


class Relation(NamedTuple):
    kind: str
    element: Element
    leading: Word
    params: tuple

    def describe(self, names=None) -> str:
        if self.kind == "comm":
            return f"comm({render(self.params[:1], names)}, {render(self.params[1:], names)})"
        if self.kind == "rb":
            return f"rb({render(self.params[0], names)}, {render(self.params[1], names)})"
        p = self.params[0]
        return f"long(beta={render((p.beta,), names)}, k={p.k}, s={len(p.vecs)})"


def _z_ok(z: Word, literal: bool) -> bool:
    if literal:
        return deg_r(z) >= 1
    return not (len(z) == 1 and type(z[0]) is Letter)


@lru_cache(maxsize=None)
def match9_all(content: Word, literal_z: bool = False) -> Tuple[Pattern9, ...]:
    """Every admissible long-pattern decomposition of the content of ``R(content)``.

    At most two exist; the maximal-``k`` one comes first.
    """
    c = content
    z1 = zlast = None
    if type(c[0]) is RBracket:
        z1, c = c[0].content, c[1:]
    if c and type(c[-1]) is RBracket:
        zlast, c = c[-1].content, c[:-1]
    if not c or type(c[0]) is RBracket or type(c[-1]) is RBracket:
        return ()
    segs: List[List[Letter]] = [[]]
    zs: List[Word] = []
    for a in c:
        if type(a) is RBracket:
            if not segs[-1]:
                return ()
            zs.append(a.content)
            segs.append([])
        else:
            segs[-1].append(a)
    for z in ([z1] if z1 is not None else []) + zs + ([zlast] if zlast is not None else []):
        if not _z_ok(z, literal_z):
            return ()
    for seg in segs[:-1]:
        if any(x.level < 1 for x in seg):
            return ()
    last = segs[-1]
    out = []
    t = last[-1]
    run = 1
    while run < len(last) and last[-1 - run] == t:
        run += 1
    # maximal k: the whole trailing run is x_{b,r+1}, preceded by x_{b,r}
    if t.level >= 1 and run < len(last) and last[-1 - run] == t.tilde:
        beta, vec = t.tilde, last[:-1 - run]
        if all(x.level >= 1 and x < beta for x in vec):
            out.append(Pattern9(z1, tuple(map(tuple, segs[:-1])) + (tuple(vec),), tuple(zs), beta, run, zlast))
    # k = 0: the last letter is x_{b,r}
    vec = last[:-1]
    if all(x.level >= 1 and x < t for x in vec):
        out.append(Pattern9(z1, tuple(map(tuple, segs[:-1])) + (tuple(vec),), tuple(zs), t, 0, zlast))
    return tuple(out)


def match9(w: Word, literal_z: bool = False) -> Optional[Pattern9]:
    """The canonical long pattern of the single R-letter word ``w``, if any."""
    if len(w) != 1 or type(w[0]) is not RBracket:
        return None
    found = match9_all(w[0].content, literal_z)
    return found[0] if found else None


class Site(NamedTuple):
    relation: Relation
    context: StarContext
    path: tuple
    start: int


def _doc_key(path: tuple, start: int) -> tuple:
    return tuple(x for p in path for x in (p, 1)) + (start, 0)


class RewriteSystem:
    """The relation set for a fixed oracle and weight, with a normal-form cache.

    ``perturb`` replaces the weight by ``weight + 1`` in the ``ab`` term of the
    ``rb`` relations (a deliberately wrong system used as a negative control).
    """

    def __init__(self, oracle: BracketOracle, weight=None, *, perturb: bool = False,
                 literal_z: bool = False, all_decompositions: bool = False):
        self.oracle = oracle
        self.weight = Fraction(oracle.weight if weight is None else weight)
        self.perturb = perturb
        self.literal_z = literal_z
        self.all_decompositions = all_decompositions
        self._nf: Dict[Word, Element] = {}
        self._long: Dict[Pattern9, Relation] = {}
        self._rb: Dict[Tuple[Word, Word], Relation] = {}

    # -- instantiation --

    def comm(self, x: Letter, y: Letter) -> Relation:
        if not x > y:
            raise ValueError("comm relations need x > y")
        e = Element.of((x, y)) - Element.of((y, x)) - self.oracle.bracket(x, y)
        return Relation("comm", e, (x, y), (x, y))

    def rb(self, a: Word, b: Word) -> Relation:
        key = (a, b)
        hit = self._rb.get(key)
        if hit is not None:
            return hit
        ra, rb_ = RBracket(a), RBracket(b)
        lam = self.weight + 1 if self.perturb else self.weight
        inner = Element.of((ra,) + b) + Element.of(a + (rb_,))
        if lam:
            inner.add_term(a + b, lam)
        w = (ra, rb_)
        rel = Relation("rb", Element.of(w) - apply_r(inner), w, (a, b))
        self._rb[key] = rel
        return rel

    def long(self, p: Pattern9) -> Relation:
        hit = self._long.get(p)
        if hit is not None:
            return hit
        w = (RBracket(p.content()),)
        opt = lambda z: None if z is None else Element.of(z)
        delta = eq5_delta(opt(p.z1), p.vecs, [Element.of(z) for z in p.zs], p.beta, p.k,
                          opt(p.zlast), self.weight, self.oracle)
        # hatted block letters can stand out of order (e.g. R(x' x x) for
        # R(x x' x')); sorting them by the commutation relations keeps the
        # ideal and makes R(content) the leading word
        e = Element.of(w) - self.normal_form(delta, kinds=("comm",))
        lw, lc = leading(e)
        if lw != w or lc != 1:
            raise AssertionError(f"long relation at {render(w)} is not monic in its leading word")
        rel = Relation("long", e, w, (p,))
        self._long[p] = rel
        return rel

    def instantiate(self, kind: str, *params) -> Relation:
        return {"comm": self.comm, "rb": self.rb, "long": self.long}[kind](*params)

    def relations_with_leading(self, w: Word) -> List[Relation]:
        """Every relation of the system whose leading word is exactly ``w``."""
        if len(w) == 2 and type(w[0]) is Letter and type(w[1]) is Letter and w[0] > w[1]:
            return [self.comm(w[0], w[1])]
        if len(w) == 2 and type(w[0]) is RBracket and type(w[1]) is RBracket:
            return [self.rb(w[0].content, w[1].content)]
        if len(w) == 1 and type(w[0]) is RBracket:
            return [self.long(p) for p in self._patterns(w[0].content)]
        return []

    def _patterns(self, content: Word) -> Tuple[Pattern9, ...]:
        found = match9_all(content, self.literal_z)
        return found if self.all_decompositions else found[:1]

    # -- finding reductions --

    def all_reductions(self, w: Word, kinds: Tuple[str, ...] = KINDS) -> List[Site]:
        """Every (relation, context) pair reducing ``w``, in document order."""
        out: List[Site] = []
        self._collect(w, w, (), out, kinds)
        out.sort(key=lambda s: (_doc_key(s.path, s.start), KINDS.index(s.relation.kind)))
        return out

    def _collect(self, root: Word, content: Word, path: tuple, out: list, kinds) -> None:
        n = len(content)
        for i, a in enumerate(content):
            if i + 1 < n:
                b = content[i + 1]
                ta, tb = type(a), type(b)
                if ta is Letter and tb is Letter and a > b:
                    if "comm" in kinds:
                        out.append(Site(self.comm(a, b), context_at(path, i, i + 2, root), path, i))
                elif ta is RBracket and tb is RBracket:
                    if "rb" in kinds:
                        out.append(Site(self.rb(a.content, b.content), context_at(path, i, i + 2, root), path, i))
            if type(a) is RBracket:
                if "long" in kinds:
                    for p in self._patterns(a.content):
                        out.append(Site(self.long(p), context_at(path, i, i + 1, root), path, i))
                self._collect(root, a.content, path + (i,), out, kinds)

    def find_reduction(self, w: Word) -> Optional[Tuple[Relation, StarContext]]:
        """Leftmost-outermost reduction with priority comm > rb > long."""
        for kind in KINDS:
            hit = self._scan(w, w, (), kind)
            if hit is not None:
                return hit
        return None

    def _scan(self, root: Word, content: Word, path: tuple, kind: str):
        n = len(content)
        for i, a in enumerate(content):
            ta = type(a)
            if kind == "comm":
                if ta is Letter and i + 1 < n and type(content[i + 1]) is Letter and a > content[i + 1]:
                    return self.comm(a, content[i + 1]), context_at(path, i, i + 2, root)
            elif kind == "rb":
                if ta is RBracket and i + 1 < n and type(content[i + 1]) is RBracket:
                    return self.rb(a.content, content[i + 1].content), context_at(path, i, i + 2, root)
            elif ta is RBracket:
                found = match9_all(a.content, self.literal_z)
                if found:
                    return self.long(found[0]), context_at(path, i, i + 1, root)
            if ta is RBracket:
                hit = self._scan(root, a.content, path + (i,), kind)
                if hit is not None:
                    return hit
        return None

    def is_irreducible(self, w: Word) -> bool:
        return all(self._scan(w, w, (), kind) is None for kind in KINDS)

    @staticmethod
    def step(w: Word, rel: Relation, q: StarContext) -> Element:
        """``q|_{lead - f}``: the result of one reduction of ``w``."""
        return in_context(q, Element.of(rel.leading) - rel.element)

    # -- normal forms --

    def nf_word(self, w: Word) -> Element:
        hit = self._nf.get(w)
        if hit is not None:
            return hit
        red = self.find_reduction(w)
        if red is None:
            res = Element.of(w)
        else:
            res = Element()
            for v, c in self.step(w, *red).terms.items():
                res.iadd(self.nf_word(v), c)
        self._nf[w] = res
        return res

    def normal_form(self, e: Element, rng: Optional[random.Random] = None,
                    kinds: Tuple[str, ...] = KINDS) -> Element:
        """Irr-projection of ``e``.

        With ``rng`` every step picks a uniformly random reduction site (all
        long decompositions included) and nothing is cached.  ``kinds``
        restricts the relation families used.
        """
        if rng is None and kinds == KINDS:
            out = Element()
            for w, c in e.terms.items():
                out.iadd(self.nf_word(w), c)
            return out
        return self._nf_worklist(e, rng, kinds)

    def _nf_worklist(self, e: Element, rng, kinds) -> Element:
        pending: Dict[Word, Fraction] = dict(e.terms)
        heap = [(_neg_key(w), w) for w in pending]
        heapq.heapify(heap)
        out = Element()
        while heap:
            _, w = heapq.heappop(heap)
            c = pending.pop(w, 0)
            if not c:
                continue
            sites = self.all_reductions(w, kinds)
            if not sites:
                out.add_term(w, c)
                continue
            s = rng.choice(sites) if rng is not None else sites[0]
            for v, d in self.step(w, s.relation, s.context).terms.items():
                if v not in pending:
                    heapq.heappush(heap, (_neg_key(v), v))
                val = pending.get(v, 0) + c * d
                pending[v] = val
        return out

    def clear_cache(self) -> None:
        self._nf.clear()


class _Desc:
    """Reverses the order of a sort key for use in a min-heap."""

    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other):
        return self.key > other.key

    def __eq__(self, other):
        return self.key == other.key


def _neg_key(w: Word) -> _Desc:
    return _Desc(sort_key(w))


# --- compositions ---------------------------------------------------------------

@dataclass
class Composition:
    kind: str
    f: Relation
    g: Relation
    word: Word
    residual: Element
    context: Optional[StarContext] = None

    def record(self, system: "RewriteSystem", names=None) -> dict:
        nf = system.normal_form(self.residual)
        return {"kind": self.kind, "f": self.f.describe(names), "g": self.g.describe(names),
                "word": render(self.word, names), "residual": nf.to_text(names)}


@dataclass(frozen=True)
class Bounds:
    max_size: int
    max_rdeg: int
    max_level: int
    n_gens: int


def words_up_to(n_gens: int, max_size: int, max_rdeg: int, max_level: int) -> Dict[Tuple[int, int], List[Word]]:
    """All words by ``(size, deg_r)`` within the bounds."""
    letters = [Letter(g, k) for g in range(n_gens) for k in range(max_level + 1)]
    atoms: Dict[Tuple[int, int], List] = {(1, 0): list(letters)}
    words: Dict[Tuple[int, int], List[Word]] = {}
    for n in range(1, max_size + 1):
        for d in range(max_rdeg + 1):
            if n >= 2 and d >= 1:
                atoms[(n, d)] = [RBracket(w) for w in words.get((n - 1, d - 1), [])]
            out: List[Word] = [(a,) for a in atoms.get((n, d), [])]
            for n1 in range(1, n):
                for d1 in range(d + 1):
                    head = atoms.get((n1, d1), [])
                    tail = words.get((n - n1, d - d1), [])
                    out.extend((a,) + t for a in head for t in tail)
            if out:
                words[(n, d)] = out
    return words


def leading_words(system: RewriteSystem, b: Bounds) -> Iterator[Word]:
    """Leading words of the system within the bounds."""
    table = words_up_to(b.n_gens, b.max_size, b.max_rdeg, b.max_level)
    for ws in table.values():
        for w in ws:
            if system.relations_with_leading(w):
                yield w


def enumerate_compositions(system: RewriteSystem, b: Bounds) -> Iterator[Composition]:
    """Inclusion compositions at every leading word within the bounds, and the
    top-level overlaps ``xyz`` and ``R(a)R(b)R(c)``."""
    table = words_up_to(b.n_gens, b.max_size, b.max_rdeg, b.max_level)
    all_words = sorted((w for ws in table.values() for w in ws), key=sort_key)
    for w in all_words:
        fs = system.relations_with_leading(w)
        if not fs:
            continue
        sites = system.all_reductions(w)
        for i, f in enumerate(fs):
            for s in sites:
                g, q = s.relation, s.context
                if q == HOLE:
                    j = fs.index(g) if g in fs else -1
                    if j <= i:
                        continue
                yield Composition("inclusion", f, g, w, f.element - in_context(q, g.element), q)
    # overlaps
    letters = [Letter(g, k) for g in range(b.n_gens) for k in range(b.max_level + 1)]
    if b.max_size >= 3:
        for x, y, z in itertools.permutations(letters, 3):
            if x > y > z:
                f, g = system.comm(x, y), system.comm(y, z)
                res = multiply(f.element, Element.of((z,))) - multiply(Element.of((x,)), g.element)
                yield Composition("intersection", f, g, (x, y, z), res)
    keys = sorted(table)
    for ka, kb, kc in itertools.product(keys, repeat=3):
        if ka[0] + kb[0] + kc[0] + 3 > b.max_size or ka[1] + kb[1] + kc[1] + 3 > b.max_rdeg:
            continue
        for a, bb, c in itertools.product(table[ka], table[kb], table[kc]):
            f, g = system.rb(a, bb), system.rb(bb, c)
            w = (RBracket(a), RBracket(bb), RBracket(c))
            res = multiply(f.element, Element.of((RBracket(c),))) - multiply(Element.of((RBracket(a),)), g.element)
            yield Composition("intersection", f, g, w, res)


def check_composition(system: RewriteSystem, c: Composition) -> Element:
    return system.normal_form(c.residual)


@dataclass
class GSReport:
    ok: bool
    checked: int
    failed: int
    by_kind: Dict[str, Dict[str, int]]
    failures: List[dict]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failed": self.failed,
                "by_kind": self.by_kind, "failures": self.failures}


def check_gs(system: RewriteSystem, b: Bounds, names=None, max_failures: int = 20) -> GSReport:
    checked = 0
    by_kind: Dict[str, Dict[str, int]] = {}
    failures: List[dict] = []
    failed = 0
    for comp in enumerate_compositions(system, b):
        checked += 1
        key = f"{comp.kind}:{comp.f.kind}/{comp.g.kind}"
        tally = by_kind.setdefault(key, {"checked": 0, "failed": 0})
        tally["checked"] += 1
        if check_composition(system, comp):
            failed += 1
            tally["failed"] += 1
            if len(failures) < max_failures:
                failures.append(comp.record(system, names))
    return GSReport(failed == 0, checked, failed, dict(sorted(by_kind.items())), failures)
