"""Arithmetic in the quotient and the induced operations."""

import random
from fractions import Fraction

import pytest

from rbgs.algebra import Element
from rbgs.cli import operation_samples
from rbgs.engine import RewriteSystem
from rbgs.enveloping import (Envelope, check_axioms, check_envelope, dendriform_defects, envelope_for,
                             letters_distinct, random_monomial)
from rbgs.presentation import PrePostLie, forced_oracle, random_prepostlie
from rbgs.terms import Letter

from conftest import system

a0, b0 = Letter(0, 0), Letter(1, 0)
y0, y1 = Letter(0, 0), Letter(0, 1)


def L(x):
    return Element.letter(x)


def test_product_examples():
    env = Envelope(system(2, 0))
    assert env.product(L(a0), L(b0)) == Element.of((a0, b0))
    assert env.product(L(b0), L(a0)) == Element.of((a0, b0))


def test_r_examples(pre1):
    assert pre1.r(L(y0)) == L(y1)
    assert pre1.r(Element.of((y0, y1))) == Element.of((y1, y1), Fraction(1, 2))
    assert pre1.r(Element()) == Element()


def test_operation_examples(pre1, post1):
    assert pre1.succ(L(y0), L(y0)) == Element.of((y0, y1))
    assert pre1.prec(L(y0), L(y0)) == Element.of((y0, y1))
    assert post1.dot(L(y0), L(y0)) == Element.of((y0, y0))
    with pytest.raises(ValueError):
        pre1.dot(L(y0), L(y0))
    assert len(pre1.operations()) == 2 and len(post1.operations()) == 3


def test_dendriform_on_generators(pre1):
    y = L(y0)
    assert all(not d for d in dendriform_defects(pre1, y, y, y))


@pytest.mark.parametrize("c", [0, 1, 2])
def test_envelope_one_generator_pre(c):
    alg = PrePostLie("pre", ("y",), 0, {(0, 0): {0: c}} if c else {})
    env = envelope_for(alg, forced_oracle(alg))
    assert env.nf(Element.of((y1, y0)) - Element.of((y0, y1))) == L(y0).scale(c)
    rep = check_envelope(alg, env)
    assert rep.ok and not rep.incomplete


def test_envelope_random_post():
    rng = random.Random(12)
    for _ in range(5):
        alg = random_prepostlie(rng, "post", 2, 1)
        rep = check_envelope(alg, envelope_for(alg, forced_oracle(alg)))
        assert rep.ok, rep.violations


def test_envelope_check_detects_a_wrong_oracle():
    alg = PrePostLie("pre", ("y",), 0, {(0, 0): {0: 1}})
    wrong = forced_oracle(PrePostLie("pre", ("y",), 0, {(0, 0): {0: 2}}))
    rep = check_envelope(alg, Envelope(RewriteSystem(wrong, 0)))
    assert not rep.ok


@pytest.mark.parametrize("lam,n", [(0, 1), (0, 2), (1, 2)])
def test_axioms_on_operation_monomials(lam, n):
    env = Envelope(system(n, lam))
    rng = random.Random(n + 10 * lam)
    samples = operation_samples(env, rng, n, 30)
    assert check_axioms(env, "rb", samples, 60, rng).ok
    assert check_axioms(env, "assoc", samples, 60, rng).ok
    if not lam:
        assert check_axioms(env, "dendriform", samples, 40, rng).ok


def test_monomials_have_the_requested_degree(pre1):
    rng = random.Random(0)
    for d in range(1, 6):
        m = random_monomial(pre1, rng, d, 1)
        assert m and all(len(w) == d for w in m.terms)


def test_unknown_axiom_family(pre1):
    with pytest.raises(ValueError):
        check_axioms(pre1, "jacobi", [L(y0)], 1, random.Random(0))


def test_letters_stay_distinct():
    assert letters_distinct(Envelope(system(2, 1)), 2, 3)
