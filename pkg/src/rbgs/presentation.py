"""Lie Rota-Baxter algebras given by a bracket oracle, and their sources.

The Lie RB-algebra ``L`` has basis letters ``x_{a,k} = P^k(x_a)``.  Its
bracket is a :class:`BracketOracle`: a partial table of rules on letter
pairs, completed by antisymmetry and, for two letters of level >= 1, by the
Rota-Baxter identity read in ``L``::

    [P(a), P(b)] = P([P(a), b] + [a, P(b)] + weight * [a, b])

:func:`forced_oracle` builds the oracle whose rules are forced by a pre- or
post-Lie algebra ``C`` (``[P(a), b] = a.b``, and ``[a, b] = [a, b]_C / weight``
in the post case).  Pairs nothing forces are handled by a policy: ``error``
raises :class:`OracleIncomplete`, ``zero`` answers 0, ``table`` consults
user-supplied rules only.

:func:`doubling` is the finite-dimensional Lie RB-algebra ``C + C'`` into which
``C`` embeds via ``c -> c'``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import Element
from .terms import Letter, render_letter

Vector = Dict[int, Fraction]
Table = Dict[Tuple[int, int], Vector]

POLICIES = ("error", "zero", "table")


class PresentationError(ValueError):
    """Invalid algebra data (weight/case mismatch, failed axiom, bad table)."""


class AxiomError(PresentationError):
    def __init__(self, message: str, triple: Tuple[int, ...] = ()):
        super().__init__(message)
        self.triple = triple


class OracleIncomplete(LookupError):
    """The oracle has no rule for a bracket it was asked for."""

    def __init__(self, u: Letter, v: Letter, names: Optional[Sequence[str]] = None):
        self.pair = (u, v)
        super().__init__(f"bracket [{render_letter(u, names)}, {render_letter(v, names)}] is not determined by the presentation")


# --- small vector helpers ---------------------------------------------------------

def vadd(a: Vector, b: Vector, c: Fraction = Fraction(1)) -> Vector:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + c * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vscale(a: Vector, c) -> Vector:
    return {k: c * v for k, v in a.items()} if c else {}


def bilinear(table: Table, a: Vector, b: Vector) -> Vector:
    out: Vector = {}
    for i, ci in a.items():
        for j, cj in b.items():
            entry = table.get((i, j))
            if entry:
                out = vadd(out, entry, ci * cj)
    return out


def basis(i: int) -> Vector:
    return {i: Fraction(1)}


def clean_table(table: Mapping[Tuple[int, int], Mapping[int, object]]) -> Table:
    return {k: {g: Fraction(c) for g, c in v.items() if Fraction(c)}
            for k, v in table.items() if any(Fraction(c) for c in v.values())}


# --- pre- and post-Lie algebras ---------------------------------------------------

@dataclass(frozen=True)
class PrePostLie:
    case: str
    gens: Tuple[str, ...]
    weight: Fraction
    product: Table = field(default_factory=dict)
    bracket: Table = field(default_factory=dict)

    def __post_init__(self):
        if self.case not in ("pre", "post"):
            raise PresentationError(f"case must be 'pre' or 'post', not {self.case!r}")
        object.__setattr__(self, "weight", Fraction(self.weight))
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "product", clean_table(self.product))
        object.__setattr__(self, "bracket", clean_table(self.bracket))
        if self.case == "pre" and self.weight != 0:
            raise PresentationError("the pre case requires weight 0")
        if self.case == "post" and self.weight == 0:
            raise PresentationError("the post case requires a nonzero weight")
        if self.case == "pre" and self.bracket:
            raise PresentationError("a pre-Lie algebra carries no bracket table")
        n = len(self.gens)
        for table in (self.product, self.bracket):
            for (i, j), v in table.items():
                if not (0 <= i < n and 0 <= j < n) or any(not 0 <= g < n for g in v):
                    raise PresentationError(f"table entry {(i, j)} refers to an unknown generator")

    @property
    def dim(self) -> int:
        return len(self.gens)

    @property
    def trivial(self) -> bool:
        return not self.product and not self.bracket

    def mul(self, a: Vector, b: Vector) -> Vector:
        return bilinear(self.product, a, b)

    def br(self, a: Vector, b: Vector) -> Vector:
        return bilinear(self.bracket, a, b)

    def violations(self) -> List[Tuple[str, Tuple[int, ...]]]:
        """Failed axioms as ``(name, basis triple)`` pairs; empty when valid."""
        out = []
        n = self.dim
        e = [basis(i) for i in range(n)]
        m, b = self.mul, self.br
        if self.case == "pre":
            for i, j, k in itertools.product(range(n), repeat=3):
                x, y, z = e[i], e[j], e[k]
                lhs = vadd(m(m(x, y), z), m(x, m(y, z)), -1)
                rhs = vadd(m(m(y, x), z), m(y, m(x, z)), -1)
                if lhs != rhs:
                    out.append(("pre-Lie identity", (i, j, k)))
            return out
        for i, j in itertools.product(range(n), repeat=2):
            if vadd(b(e[i], e[j]), b(e[j], e[i])):
                out.append(("antisymmetry", (i, j)))
        for i, j, k in itertools.product(range(n), repeat=3):
            x, y, z = e[i], e[j], e[k]
            jac = vadd(vadd(b(x, b(y, z)), b(y, b(z, x))), b(z, b(x, y)))
            if jac:
                out.append(("Jacobi", (i, j, k)))
            lhs = vadd(vadd(vadd(m(m(x, y), z), m(x, m(y, z)), -1), m(m(y, x), z), -1), m(y, m(x, z)))
            if lhs != m(b(y, x), z):
                out.append(("post-Lie identity 1", (i, j, k)))
            if m(x, b(y, z)) != vadd(b(m(x, y), z), b(y, m(x, z))):
                out.append(("post-Lie identity 2", (i, j, k)))
        return out

    def check(self) -> "PrePostLie":
        bad = self.violations()
        if bad:
            name, triple = bad[0]
            named = ", ".join(self.gens[t] for t in triple)
            raise AxiomError(f"{name} fails on ({named})", triple)
        return self


# --- bracket oracles ------------------------------------------------------------

def shift(e: Element, by: int = 1) -> Element:
    """Apply ``P`` to a combination of letters."""
    out = Element()
    for w, c in e.terms.items():
        (x,) = w
        out.terms[(x.shifted(by),)] = c
    return out


def letters_of(v: Vector, level: int = 0) -> Element:
    out = Element()
    for g, c in v.items():
        out.add_term((Letter(g, level),), c)
    return out


class BracketOracle:
    """Bracket of ``L`` on letters, returned as an :class:`Element` of letters.

    ``rules`` maps ordered letter pairs to results; a rule for ``(v, u)`` also
    answers ``(u, v)`` by antisymmetry.  Rules on two letters of level >= 1
    override the derived value (:func:`validate` reports such overrides when
    they break the Rota-Baxter identity).  Results are memoised; the memo is a
    plain dict, which is safe to share between threads because every value is
    a pure function of the rules.
    """

    def __init__(self, n_gens: int, weight=0, rules: Optional[Mapping[Tuple[Letter, Letter], Element]] = None,
                 policy: str = "error", names: Optional[Sequence[str]] = None):
        if policy not in POLICIES:
            raise PresentationError(f"unknown higher-bracket policy {policy!r}")
        self.n_gens = n_gens
        self.weight = Fraction(weight)
        self.policy = policy
        self.names = tuple(names) if names is not None else tuple(f"x{i}" for i in range(n_gens))
        self.rules: Dict[Tuple[Letter, Letter], Element] = {}
        for (u, v), e in (rules or {}).items():
            self.rules[(u, v)] = e
        self._memo: Dict[Tuple[Letter, Letter], Element] = {}

    @classmethod
    def abelian(cls, n_gens: int, weight=0, names=None) -> "BracketOracle":
        return cls(n_gens, weight, policy="zero", names=names)

    def bracket(self, u: Letter, v: Letter) -> Element:
        key = (u, v)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        res = self._compute(u, v)
        self._memo[key] = res
        return res

    def _compute(self, u: Letter, v: Letter) -> Element:
        if u == v:
            return Element()
        if (u, v) in self.rules:
            return self.rules[(u, v)]
        if (v, u) in self.rules:
            return -self.rules[(v, u)]
        if u.level >= 1 and v.level >= 1:
            return self.derived(u, v)
        if self.policy == "zero":
            return Element()
        raise OracleIncomplete(u, v, self.names)

    def derived(self, u: Letter, v: Letter) -> Element:
        """``[u, v]`` for levels >= 1 from the Rota-Baxter identity."""
        ut, vt = u.tilde, v.tilde
        inner = self.bracket(u, vt) + self.bracket(ut, v)
        if self.weight:
            inner.iadd(self.bracket(ut, vt), self.weight)
        return shift(inner)

    def bracket_vec(self, a: Element, b: Element) -> Element:
        out = Element()
        for (x,), c in a.terms.items():
            for (y,), d in b.terms.items():
                out.iadd(self.bracket(x, y), c * d)
        return out

    def letters(self, max_level: int) -> List[Letter]:
        return [Letter(g, k) for g in range(self.n_gens) for k in range(max_level + 1)]


def forced_oracle(c: PrePostLie, policy: Optional[str] = None,
                  table: Optional[Mapping[Tuple[Letter, Letter], Element]] = None) -> BracketOracle:
    """The oracle whose rules are forced by the envelope conditions for ``c``.

    Trivial products force every bracket to vanish, so the policy defaults to
    ``zero`` there and to ``error`` otherwise.
    """
    if c.case == "pre" and c.weight != 0 or c.case == "post" and c.weight == 0:
        raise PresentationError(f"weight {c.weight} is invalid for the {c.case} case")
    if policy is None:
        policy = "zero" if c.trivial else "error"
    rules: Dict[Tuple[Letter, Letter], Element] = {}
    n = c.dim
    for a in range(n):
        for b in range(n):
            rules[(Letter(a, 1), Letter(b, 0))] = letters_of(c.mul(basis(a), basis(b)))
    if c.case == "post":
        inv = 1 / c.weight
        for a in range(n):
            for b in range(a + 1, n):
                rules[(Letter(a, 0), Letter(b, 0))] = letters_of(vscale(c.br(basis(a), basis(b)), inv))
    for (u, v), e in (table or {}).items():
        if (u, v) in rules or (v, u) in rules:
            raise PresentationError(f"table entry for {render_letter(u, c.gens)} {render_letter(v, c.gens)} overrides a forced bracket")
        rules[(u, v)] = e
    return BracketOracle(n, c.weight, rules, policy, c.gens)


@dataclass
class Report:
    """Outcome of a report-based check."""

    name: str
    ok: bool = True
    violations: List[dict] = field(default_factory=list)
    incomplete: List[str] = field(default_factory=list)
    checked: int = 0
    extra: dict = field(default_factory=dict)

    def fail(self, **info) -> None:
        self.ok = False
        self.violations.append(info)

    def to_dict(self) -> dict:
        out = {"check": self.name, "ok": self.ok, "checked": self.checked,
               "violations": self.violations, "incomplete": self.incomplete}
        out.update(self.extra)
        return out


def validate(o: BracketOracle, level_bound: int) -> Report:
    """Antisymmetry, Jacobi, Rota-Baxter coherence and the image-subalgebra
    condition on all letters of level <= ``level_bound``."""
    rep = Report("oracle")
    names = o.names
    lets = o.letters(level_bound)

    def txt(*xs):
        return ", ".join(render_letter(x, names) for x in xs)

    def guarded(fn, *args):
        try:
            return fn(*args)
        except OracleIncomplete as exc:
            rep.incomplete.append(txt(*exc.pair))
            return None

    for u in lets:
        for v in lets:
            rep.checked += 1
            a, b = guarded(o.bracket, u, v), guarded(o.bracket, v, u)
            if a is None or b is None:
                continue
            if a + b:
                rep.fail(kind="antisymmetry", letters=txt(u, v))
            if u.level >= 1 and v.level >= 1 and u != v:
                if any(w[0].level < 1 for w in a.terms):
                    rep.fail(kind="image-subalgebra", letters=txt(u, v))
                d = guarded(_derivation, o, u, v)
                if d is not None and d != a:
                    rep.fail(kind="rb-coherence", letters=txt(u, v))

    def jacobi(x, y, z):
        X, Y, Z = (Element.letter(t) for t in (x, y, z))
        return (o.bracket_vec(X, o.bracket_vec(Y, Z)) + o.bracket_vec(Y, o.bracket_vec(Z, X))
                + o.bracket_vec(Z, o.bracket_vec(X, Y)))

    for x, y, z in itertools.combinations(lets, 3):
        rep.checked += 1
        j = guarded(jacobi, x, y, z)
        if j:
            rep.fail(kind="Jacobi", letters=txt(x, y, z))
    rep.incomplete = sorted(set(rep.incomplete))
    return rep


def _derivation(o: BracketOracle, u: Letter, v: Letter) -> Element:
    ut, vt = u.tilde, v.tilde
    inner = o.bracket(u, vt) + o.bracket(ut, v)
    if o.weight:
        inner.iadd(o.bracket(ut, vt), o.weight)
    return shift(inner)


# --- doubling ----------------------------------------------------------------

@dataclass(frozen=True)
class DoubledAlgebra:
    """``C + C'`` with basis ``0..n-1`` (``C``) and ``n..2n-1`` (``C'``)."""

    base: PrePostLie
    bracket_table: Table
    operator: Dict[int, Vector]

    @property
    def n(self) -> int:
        return self.base.dim

    @property
    def dim(self) -> int:
        return 2 * self.base.dim

    def prime(self, v: Vector) -> Vector:
        return {k + self.n: c for k, c in v.items()}

    def br(self, a: Vector, b: Vector) -> Vector:
        return bilinear(self.bracket_table, a, b)

    def P(self, a: Vector) -> Vector:
        out: Vector = {}
        for i, c in a.items():
            out = vadd(out, self.operator.get(i, {}), c)
        return out

    def label(self, i: int) -> str:
        g = self.base.gens
        return g[i] if i < self.n else g[i - self.n] + "'"


def doubling(c: PrePostLie) -> DoubledAlgebra:
    if c.case == "pre" and c.weight != 0 or c.case == "post" and c.weight == 0:
        raise PresentationError(f"weight {c.weight} is invalid for the {c.case} case")
    n, lam = c.dim, c.weight
    table: Table = {}

    def put(i, j, v):
        if v:
            table[(i, j)] = v

    for a in range(n):
        for b in range(n):
            ea, eb = basis(a), basis(b)
            ab = c.mul(ea, eb)
            cc = vadd(ab, c.mul(eb, ea), -1)
            if c.case == "post":
                cc = vadd(cc, c.br(ea, eb))
            put(a, b, cc)
            put(a, b + n, {k + n: v for k, v in ab.items()})
            put(b + n, a, {k + n: -v for k, v in ab.items()})
            if c.case == "post":
                put(a + n, b + n, {k + n: v / lam for k, v in c.br(ea, eb).items()})
    operator = {}
    for a in range(n):
        operator[a + n] = basis(a)
        operator[a] = vscale(basis(a), -lam)
    return DoubledAlgebra(c, table, operator)


def check_doubling(d: DoubledAlgebra) -> Report:
    rep = Report("doubling")
    c, lam, n = d.base, d.base.weight, d.n
    e = [basis(i) for i in range(d.dim)]
    br, P = d.br, d.P
    for i, j in itertools.product(range(d.dim), repeat=2):
        rep.checked += 1
        x, y = e[i], e[j]
        if vadd(br(x, y), br(y, x)):
            rep.fail(kind="antisymmetry", basis=[d.label(i), d.label(j)])
        lhs = br(P(x), P(y))
        rhs = P(vadd(vadd(br(P(x), y), br(x, P(y))), br(x, y), lam))
        if lhs != rhs:
            rep.fail(kind="rota-baxter", basis=[d.label(i), d.label(j)])
    for i, j, k in itertools.product(range(d.dim), repeat=3):
        rep.checked += 1
        x, y, z = e[i], e[j], e[k]
        if vadd(vadd(br(x, br(y, z)), br(y, br(z, x))), br(z, br(x, y))):
            rep.fail(kind="Jacobi", basis=[d.label(i), d.label(j), d.label(k)])
    for a, b in itertools.product(range(n), repeat=2):
        rep.checked += 1
        ap, bp = d.prime(basis(a)), d.prime(basis(b))
        if br(P(ap), bp) != d.prime(c.mul(basis(a), basis(b))):
            rep.fail(kind="embedding-product", basis=[d.label(a), d.label(b)])
        if c.case == "post" and vscale(br(ap, bp), lam) != d.prime(c.br(basis(a), basis(b))):
            rep.fail(kind="embedding-bracket", basis=[d.label(a), d.label(b)])
    return rep


# --- random valid inputs -----------------------------------------------------------

@lru_cache(maxsize=None)
def _catalog(case: str, n: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]:
    """Structure constants in {-1, 0, 1} satisfying the axioms.

    Each entry is ``(product, bracket)`` flattened as ``T[i, j, k]``.
    """
    import numpy as np

    vals = (-1, 0, 1)
    prods = np.array(list(itertools.product(vals, repeat=n ** 3)), dtype=np.int64).reshape(-1, n, n, n)

    def assoc_ok(M):
        # (xy)z - x(yz) symmetric in x, y
        xy_z = np.einsum("cijm,cmkl->cijkl", M, M)
        x_yz = np.einsum("cjkm,ciml->cijkl", M, M)
        a = xy_z - x_yz
        return (a == a.transpose(0, 2, 1, 3, 4)).reshape(len(M), -1).all(axis=1)

    if case == "pre":
        ok = assoc_ok(prods)
        zero = np.zeros(n ** 3, dtype=np.int64)
        return tuple((tuple(p.ravel()), tuple(zero)) for p in prods[ok])

    # post: antisymmetric brackets with Jacobi, products with both identities
    brs = []
    for flat in itertools.product(vals, repeat=n ** 3):
        B = np.array(flat, dtype=np.int64).reshape(n, n, n)
        if not (B == -B.transpose(1, 0, 2)).all():
            continue
        jac = (np.einsum("jkm,iml->ijkl", B, B) + np.einsum("kim,jml->ijkl", B, B)
               + np.einsum("ijm,kml->ijkl", B, B))
        if (jac == 0).all():
            brs.append(B)
    out = []
    for B in brs:
        M = prods
        xy_z = np.einsum("cijm,cmkl->cijkl", M, M)
        x_yz = np.einsum("cjkm,ciml->cijkl", M, M)
        yx_z = xy_z.transpose(0, 2, 1, 3, 4)
        y_xz = x_yz.transpose(0, 2, 1, 3, 4)
        lhs1 = xy_z - x_yz - yx_z + y_xz
        rhs1 = np.einsum("jim,cmkl->cijkl", B, M)
        ok1 = (lhs1 == rhs1).reshape(len(M), -1).all(axis=1)
        lhs2 = np.einsum("jkm,ciml->cijkl", B, M)
        rhs2 = np.einsum("cijm,mkl->cijkl", M, B) + np.einsum("cikm,jml->cijkl", M, B)
        ok2 = (lhs2 == rhs2).reshape(len(M), -1).all(axis=1)
        for p in M[ok1 & ok2]:
            out.append((tuple(p.ravel()), tuple(B.ravel())))
    return tuple(out)


def _table_from_flat(flat: Sequence[int], n: int) -> Table:
    t: Table = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        c = flat[(i * n + j) * n + k]
        if c:
            t.setdefault((i, j), {})[k] = Fraction(c)
    return t


def _invert(g: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(g)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def transport(t: Table, g: List[List[Fraction]], scale=1) -> Table:
    """``x *' y = scale * g(g^-1 x * g^-1 y)`` on basis vectors."""
    n = len(g)
    gi = _invert(g)

    def apply(m, v):
        out: Vector = {}
        for j, c in v.items():
            for i in range(n):
                if m[i][j]:
                    out = vadd(out, {i: m[i][j] * c})
        return out

    out: Table = {}
    for a, b in itertools.product(range(n), repeat=2):
        v = bilinear(t, apply(gi, basis(a)), apply(gi, basis(b)))
        v = vscale(apply(g, v), Fraction(scale))
        if v:
            out[(a, b)] = v
    return out


def random_prepostlie(rng: random.Random, case: str, n: int, weight=None,
                      names: Optional[Sequence[str]] = None) -> PrePostLie:
    """A random valid pre- or post-Lie algebra of dimension ``n``.

    A catalog member with small integer constants is moved by a random
    invertible change of basis and rescaled, which preserves the axioms.
    """
    if weight is None:
        weight = 0 if case == "pre" else rng.choice((1, 2, -1))
    cat = _catalog(case, n)
    prod_flat, br_flat = rng.choice(cat)
    while True:
        g = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        det = g[0][0] if n == 1 else _det(g)
        if det:
            break
    scale = Fraction(rng.choice((1, 1, 2, -1)), rng.choice((1, 1, 2, 3)))
    product = transport(_table_from_flat(prod_flat, n), g, scale)
    bracket = transport(_table_from_flat(br_flat, n), g, scale)
    names = names or (("y",) if n == 1 else tuple("abcdefgh"[:n]))
    return PrePostLie(case, names, weight, product, bracket if case == "post" else {}).check()


def _det(g) -> Fraction:
    n = len(g)
    if n == 1:
        return g[0][0]
    if n == 2:
        return g[0][0] * g[1][1] - g[0][1] * g[1][0]
    return sum((-1) ** j * g[0][j] * _det([row[:j] + row[j + 1:] for row in g[1:]]) for j in range(n))
