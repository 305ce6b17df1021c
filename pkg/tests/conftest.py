"""Shared strategies and helpers for the suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ghquiver.necklace import CycSum, LetterPoly, abstract_alphabet
from ghquiver.quiver import NCPoly, PathWord, QuiverSpec, build_quiver
from ghquiver.scalars import Gauss


def gauss_st(max_num=4, max_den=3):
    frac = st.fractions(
        min_value=Fraction(-max_num), max_value=Fraction(max_num), max_denominator=max_den
    )
    return st.builds(Gauss, frac, frac)


def nonzero_gauss_st():
    return gauss_st().filter(lambda c: not c.is_zero())


@st.composite
def word_st(draw, spec: QuiverSpec, max_len=4):
    """A random composable word, built by a reverse walk on the quiver."""
    length = draw(st.integers(min_value=0, max_value=max_len))
    vertex = draw(st.sampled_from([1, 2]))
    if length == 0:
        return PathWord((), vertex, vertex)
    arrows = []
    cur = vertex  # building right-to-left: next arrow must start at cur
    for _ in range(length):
        options = [n for n in spec.arrow_names if spec.source(n) == cur]
        name = draw(st.sampled_from(options))
        arrows.append(name)
        cur = spec.target(name)
    arrows.reverse()
    return spec.word(arrows)


@st.composite
def ncpoly_st(draw, spec: QuiverSpec, max_terms=3, max_len=4):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    out = spec.zero()
    for _ in range(n):
        w = draw(word_st(spec, max_len))
        c = draw(gauss_st())
        out = out + NCPoly(spec, {w: c})
    return out


@st.composite
def closed_ncpoly_st(draw, spec: QuiverSpec, max_terms=2, max_len=4):
    """Sums of closed words (necklace material)."""
    from ghquiver.quiver import to_necklace

    n = draw(st.integers(min_value=1, max_value=max_terms))
    out = spec.zero()
    for _ in range(n):
        w = draw(word_st(spec, max_len).filter(lambda w: w.is_closed() and len(w) > 0))
        c = draw(gauss_st())
        out = out + NCPoly(spec, {w: c})
    return to_necklace(out)


@st.composite
def cycsum_st(draw, alphabet, max_terms=3, max_len=5):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = {}
    for _ in range(n):
        L = draw(st.integers(min_value=1, max_value=max_len))
        w = tuple(draw(st.sampled_from(alphabet.names)) for _ in range(L))
        terms[w] = draw(gauss_st())
    return CycSum(alphabet, terms)


def rand_gauss(rng: random.Random, span=3) -> Gauss:
    return Gauss(
        Fraction(rng.randint(-span, span), rng.randint(1, 2)),
        Fraction(rng.randint(-1, 1), 1),
    )


def rand_cycsum(rng: random.Random, alphabet, max_terms=2, max_len=4) -> CycSum:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        L = rng.randint(1, max_len)
        w = tuple(rng.choice(alphabet.names) for _ in range(L))
        terms[w] = rand_gauss(rng)
    return CycSum(alphabet, terms)


@pytest.fixture
def rng():
    return random.Random(20250809)
