"""Bracketed words of the free operated semigroup and their monomial order.

A word is a nonempty tuple of atoms.  An atom is either a :class:`Letter`
``x_{gen,level}`` or an :class:`RBracket` wrapping a nonempty word.  Adjacent
R-brackets are legal; any juxtaposition of atoms is a word.

Words are plain tuples so equality and hashing run at C speed.  The order is
realised by :func:`sort_key`: R-degree first, then breadth, then the atoms
left to right, where every letter lies below every R-letter, letters compare
by ``(gen, level)`` and ``R(a) < R(b)`` iff ``a < b``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, NamedTuple, Optional, Sequence, Tuple, Union


class Letter(NamedTuple):
    gen: int
    level: int = 0

    def shifted(self, by: int = 1) -> "Letter":
        return Letter(self.gen, self.level + by)

    @property
    def tilde(self) -> "Letter":
        """The letter one level down, so that ``R(x.tilde) = x``."""
        if self.level < 1:
            raise ValueError(f"level-0 letter {self} has no preimage under P")
        return Letter(self.gen, self.level - 1)


class RBracket(NamedTuple):
    content: "Word"


Atom = Union[Letter, RBracket]
Word = Tuple[Atom, ...]


class Star:
    """Placeholder atom of a star context (a singleton)."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "STAR"


STAR = Star()


def word(*atoms: Atom) -> Word:
    if not atoms:
        raise ValueError("words are nonempty")
    return tuple(atoms)


def R(*atoms: Atom) -> RBracket:
    """``R(a, b)`` is the R-letter of the word ``ab``."""
    if not atoms:
        raise ValueError("R-bracket content must be nonempty")
    return RBracket(tuple(atoms))


def is_letter(atom) -> bool:
    return type(atom) is Letter


def is_bracket(atom) -> bool:
    return type(atom) is RBracket


@lru_cache(maxsize=None)
def deg_r(w: Word) -> int:
    """Number of R symbols at all depths."""
    return sum(1 + deg_r(a.content) for a in w if type(a) is RBracket)


def breadth(w: Word) -> int:
    """Length of ``w`` over letters and R-letters (top level only)."""
    return len(w)


@lru_cache(maxsize=None)
def size(w: Word) -> int:
    """Atoms counted through every nesting level."""
    return sum(1 if type(a) is Letter else 1 + size(a.content) for a in w)


@lru_cache(maxsize=None)
def letter_count(w: Word) -> int:
    """Letter occurrences at all depths."""
    return sum(1 if type(a) is Letter else letter_count(a.content) for a in w)


@lru_cache(maxsize=None)
def max_level(w: Word) -> int:
    return max(a.level if type(a) is Letter else max_level(a.content) for a in w)


def is_r_free(w: Word) -> bool:
    return all(type(a) is Letter for a in w)


@lru_cache(maxsize=None)
def sort_key(w: Word) -> tuple:
    return (deg_r(w), len(w), tuple(_atom_key(a) for a in w))


def _atom_key(a: Atom) -> tuple:
    if type(a) is Letter:
        return (0, a.gen, a.level)
    return (1, sort_key(a.content))


def compare(u: Word, v: Word) -> int:
    """-1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    if u == v:
        return 0
    return -1 if sort_key(u) < sort_key(v) else 1


# --- star contexts -----------------------------------------------------------

class StarContext(NamedTuple):
    """A word with exactly one :data:`STAR` atom, possibly nested.

    The star stands for a (sub)word of any breadth: substituting ``u`` splices
    its atoms in place of the star.
    """

    atoms: tuple

    def __str__(self) -> str:
        return render_context(self)


HOLE = StarContext((STAR,))


def substitute(q: StarContext, u: Word) -> Word:
    return _subst(q.atoms, u)


def _subst(atoms: tuple, u: Word) -> Word:
    out = []
    for a in atoms:
        if a is STAR:
            out.extend(u)
        elif type(a) is RBracket and _has_star(a.content):
            out.append(RBracket(_subst(a.content, u)))
        else:
            out.append(a)
    return tuple(out)


def _has_star(atoms: tuple) -> bool:
    for a in atoms:
        if a is STAR:
            return True
        if type(a) is RBracket and _has_star(a.content):
            return True
    return False


def context_at(path: Sequence[int], start: int, stop: int, w: Word) -> StarContext:
    """Context replacing ``w'[start:stop]`` by a star, where ``w'`` is the
    content reached by following the bracket positions ``path`` from ``w``."""
    return StarContext(_ctx(tuple(path), start, stop, w))


def _ctx(path: tuple, start: int, stop: int, w: Word) -> tuple:
    if not path:
        return w[:start] + (STAR,) + w[stop:]
    i = path[0]
    inner = _ctx(path[1:], start, stop, w[i].content)
    return w[:i] + (RBracket(inner),) + w[i + 1:]


def wrap(q: StarContext, left: Word = (), right: Word = (), bracket: bool = False) -> StarContext:
    """Compose elementary contexts: ``left R?(q) right``."""
    inner = q.atoms
    if bracket:
        inner = (RBracket(inner),)
    return StarContext(tuple(left) + inner + tuple(right))


def compose(outer: StarContext, inner: StarContext) -> StarContext:
    """The context ``outer|_{inner}``."""
    return StarContext(_subst(outer.atoms, inner.atoms))


def walk(w: Word, path: tuple = ()) -> Iterator[Tuple[tuple, Word]]:
    """Pre-order traversal: yields ``(path, content)`` for ``w`` and every
    bracket content inside it, outermost first, left to right."""
    yield path, w
    for i, a in enumerate(w):
        if type(a) is RBracket:
            yield from walk(a.content, path + (i,))


def occurrences(w: Word, t: Word) -> list:
    """All contexts ``q`` with ``substitute(q, t) == w``.

    Order: document order of the match start; a match beginning at an atom
    precedes the matches nested inside that atom.
    """
    out = []
    n = len(t)
    for path, content in walk(w):
        for i in range(len(content) - n + 1):
            if content[i:i + n] == t:
                out.append((path, i))
    out.sort(key=_doc_key)
    return [context_at(p, i, i + n, w) for p, i in out]


def _doc_key(pi):
    path, start = pi
    # An occurrence at (path, start) sits at document position path + (start,);
    # a match starting at atom j of some content precedes matches inside atom j.
    return tuple(x for p in path for x in (p, 1)) + (start, 0)


# --- rendering ---------------------------------------------------------------

def render_letter(x: Letter, names: Optional[Sequence[str]] = None) -> str:
    name = names[x.gen] if names is not None else f"x{x.gen}"
    return name if x.level == 0 else f"P^{x.level}({name})"


def render(w: Word, names: Optional[Sequence[str]] = None) -> str:
    return " ".join(_render_atom(a, names) for a in w)


def _render_atom(a, names) -> str:
    if type(a) is Letter:
        return render_letter(a, names)
    if a is STAR:
        return "*"
    return "R(" + " ".join(_render_atom(b, names) for b in a.content) + ")"


def render_context(q: StarContext, names: Optional[Sequence[str]] = None) -> str:
    return " ".join(_render_atom(a, names) for a in q.atoms)
