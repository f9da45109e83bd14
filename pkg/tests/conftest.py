"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import sys

import pytest
from hypothesis import strategies as st

from rbgs.engine import RewriteSystem
from rbgs.enveloping import Envelope
from rbgs.presentation import BracketOracle
from rbgs.terms import Letter, RBracket, deg_r, size

letters = st.builds(Letter, st.integers(0, 1), st.integers(0, 2))


def _extend(children):
    atom = st.one_of(letters, children.map(RBracket))
    return st.lists(atom, min_size=1, max_size=3).map(tuple)


words = st.recursive(st.lists(letters, min_size=1, max_size=3).map(tuple), _extend, max_leaves=6)

# normal forms of deeply nested words grow quickly; keep rewriting tests small
small_words = words.filter(lambda w: size(w) <= 8 and deg_r(w) <= 3)


def system(n_gens: int = 1, weight=0, **options) -> RewriteSystem:
    return RewriteSystem(BracketOracle.abelian(n_gens, weight), weight, **options)


@pytest.fixture
def pre1():
    return Envelope(system(1, 0))


@pytest.fixture
def post1():
    return Envelope(system(1, 1))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
