"""PBW bases: enumeration, membership, counts and closure."""

import random

import pytest

from rbgs.enveloping import Envelope, envelope_for
from rbgs.pbw import (alphabet, closure_report, com_words, enumerate_e, hilbert_counts, independent,
                      is_exception, is_in_e, parse_e, rank)
from rbgs.algebra import Element
from rbgs.presentation import PrePostLie, forced_oracle, random_prepostlie
from rbgs.terms import Letter, R, render

from conftest import system

y, Py = Letter(0, 0), Letter(0, 1)
a, Pa, b = Letter(0, 0), Letter(0, 1), Letter(1, 0)


def texts(case, n, d):
    return [e.text(("y", "z")[:n]) for e in enumerate_e(case, n, d)]


def test_com_words():
    assert com_words([y, Py], 2) == [(y, y), (y, Py), (Py, Py)]
    assert com_words([y, Py], 1) == [(y,), (Py,)]
    assert len(com_words([a, Pa, b], 2)) == 6
    with pytest.raises(ValueError):
        com_words([y], 0)


def test_alphabet_order():
    assert alphabet(2) == [Letter(0, 0), Letter(0, 1), Letter(1, 0), Letter(1, 1)]


def test_pre_one_generator_example():
    for d in range(1, 9):
        assert texts("pre", 1, d) == [" ".join(["y"] + ["P^1(y)"] * (d - 1))]


def test_post_one_generator_degree_two():
    assert texts("post", 1, 2) == ["y P^1(y)", "y y"]


def test_degree_one_is_the_generators():
    for case in ("pre", "post"):
        assert texts(case, 2, 1) == ["y", "z"]


def test_hilbert_counts():
    assert hilbert_counts("pre", 1, 8) == [1] * 8
    assert hilbert_counts("pre", 2, 5) == [2, 4, 10, 32, 120]
    assert hilbert_counts("post", 1, 6) == [1, 2, 5, 15, 50, 177]
    assert hilbert_counts("post", 2, 4) == [2, 7, 32, 182]


def test_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_e("tri", 1, 1)
    with pytest.raises(ValueError):
        enumerate_e("pre", 1, 0)


def test_membership_examples():
    assert is_in_e((y,), "pre") == (True, "ok")
    ok, why = is_in_e((R(y, Py), y), "pre")
    assert not ok and "exception" in why
    ok, why = is_in_e((Py,), "post")
    assert not ok and "condition 1" in why
    ok, why = is_in_e((Py, y), "post")
    assert not ok and "increasing" in why
    ok, why = is_in_e((y, Letter(0, 2)), "post")
    assert not ok
    ok, why = is_in_e((y, y), "pre")
    assert not ok and "exactly one" in why


@pytest.mark.parametrize("case,n,d", [("pre", 2, 5), ("post", 2, 4), ("post", 1, 5)])
def test_enumeration_parses_back(case, n, d):
    es = enumerate_e(case, n, d)
    assert len({e.word for e in es}) == len(es)
    for e in es:
        got, why = parse_e(e.word, case)
        assert got == e, why
        assert e.degree == d


def test_exception_contents_never_appear():
    for e in enumerate_e("post", 2, 5):
        for a_ in e.word:
            if type(a_) is not Letter:
                sub, _ = parse_e(a_.content, "post")
                assert sub is not None and not is_exception(sub)


@pytest.mark.parametrize("lam,case", [(0, "pre"), (1, "post")])
def test_basis_words_are_irreducible(lam, case):
    s = system(2, lam)
    for d in range(1, 5):
        for e in enumerate_e(case, 2, d):
            assert s.is_irreducible(e.word), render(e.word)


def test_rank():
    e1, e2 = Element.of((y,)), Element.of((Py,))
    assert rank([e1, e2, e1 + e2, e1.scale(3)]) == 2
    assert independent([Element(), e1]) == [e1] or rank([e1]) == 1


@pytest.mark.parametrize("case,lam,n,d", [("pre", 0, 1, 8), ("pre", 0, 2, 4), ("post", 1, 1, 5)])
def test_closure(case, lam, n, d):
    rep = closure_report(Envelope(system(n, lam)), case, n, d)
    assert rep.ok, rep.violations[:3]
    dims = rep.extra["dimensions"]
    assert all(v["rank"] == v["count"] for v in dims.values())
    if case == "post" and n == 1:
        assert dims[2]["new"] == 2 and dims[2]["rank"] == 3


@pytest.mark.parametrize("seed,case,weight", [(1, "pre", 0), (2, "pre", 0), (1, "post", 1), (3, "post", 2)])
def test_closure_for_nontrivial_products(seed, case, weight):
    c = random_prepostlie(random.Random(seed), case, 2, weight)
    rep = closure_report(envelope_for(c, forced_oracle(c)), case, 2, 3)
    assert rep.ok and not rep.incomplete, rep.violations[:3]


def test_closure_one_generator_with_product():
    c = PrePostLie("pre", ("y",), 0, {(0, 0): {0: 1}})
    rep = closure_report(envelope_for(c, forced_oracle(c)), "pre", 1, 5)
    assert rep.ok
    assert [v["rank"] for v in rep.extra["dimensions"].values()] == [1, 2, 3, 4, 5]


def test_closure_detects_a_wrong_basis():
    # the pre-case rendering is too small for the post envelope
    rep = closure_report(Envelope(system(1, 1)), "pre", 1, 3)
    assert not rep.ok
