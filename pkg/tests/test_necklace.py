import pytest
from hypothesis import given, settings

from ghquiver.errors import UnknownLetter
from ghquiver.exprs import parse_cycsum, parse_letterpoly
from ghquiver.necklace import (
    CycSum,
    LetterPoly,
    abstract_alphabet,
    moment_element,
    necklace_derivative,
    op_triangular_alphabet,
    poisson_bracket,
    triangular_alphabet,
)
from ghquiver.quiver import build_quiver, to_necklace
from ghquiver.scalars import Gauss

from conftest import closed_ncpoly_st, cycsum_st

ab = abstract_alphabet(["a", "b"])


def test_derivative_paper_values():
    f1 = parse_cycsum("abab", ab)
    assert necklace_derivative(f1, "a") == parse_letterpoly("2 bab", ab)
    assert necklace_derivative(f1, "b") == parse_letterpoly("2 aba", ab)
    f2 = parse_cycsum("bba", ab)
    assert necklace_derivative(f2, "b") == parse_letterpoly("ba + ab", ab)
    assert necklace_derivative(f2, "a") == parse_letterpoly("bb", ab)
    astar = parse_cycsum("b", ab)
    assert necklace_derivative(astar, "a").is_zero()


def test_derivative_unknown_letter():
    with pytest.raises(UnknownLetter):
        necklace_derivative(parse_cycsum("ab", ab), "c")


@settings(max_examples=40, deadline=None)
@given(cycsum_st(ab), cycsum_st(ab))
def test_derivative_linear(f, g):
    for letter in ab.names:
        assert necklace_derivative(f + g, letter) == necklace_derivative(
            f, letter
        ) + necklace_derivative(g, letter)


@settings(max_examples=60, deadline=None)
@given(cycsum_st(ab, max_terms=2, max_len=5))
def test_derivatives_have_no_kernel(f):
    if f.is_zero():
        return
    assert any(not necklace_derivative(f, g).is_zero() for g in ab.names)


@settings(max_examples=50, deadline=None)
@given(cycsum_st(ab, max_terms=3, max_len=5))
def test_sum_commutator_identity(f):
    total = LetterPoly.zero(ab)
    for g in ab.names:
        dg = necklace_derivative(f, g)
        total = total + dg.commutator(LetterPoly.word(ab, (g,)))
    assert total.is_zero()


# -- bracket -----------------------------------------------------------------

s2 = build_quiver(2)
s3 = build_quiver(3)


def neck(spec, text):
    from ghquiver.exprs import parse_ncpoly

    return to_necklace(parse_ncpoly(text, spec))


def test_bracket_a_astar():
    assert poisson_bracket(neck(s2, "a"), neck(s2, "a*"), s2) == s2.idem(1)


def test_bracket_E_grid_r2():
    E = lambda i, j: neck(s2, f"d{i} b{j}")
    got = poisson_bracket(E(1, 2), E(2, 1), s2)
    assert got == to_necklace(
        s2.arrow("d1") * s2.arrow("b1") - s2.arrow("d2") * s2.arrow("b2")
    )


def test_bracket_antisymmetry_self():
    a = neck(s2, "a")
    assert poisson_bracket(a, a, s2).is_zero()


@settings(max_examples=30, deadline=None)
@given(closed_ncpoly_st(s2), closed_ncpoly_st(s2))
def test_bracket_antisymmetric(w1, w2):
    assert poisson_bracket(w1, w2, s2) == -poisson_bracket(w2, w1, s2)


@settings(max_examples=15, deadline=None)
@given(
    closed_ncpoly_st(s2, max_terms=1, max_len=3),
    closed_ncpoly_st(s2, max_terms=1, max_len=3),
    closed_ncpoly_st(s2, max_terms=1, max_len=3),
)
def test_bracket_jacobi(f, g, h):
    br = lambda x, y: poisson_bracket(x, y, s2)
    total = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    assert total.is_zero()


# -- moment elements ------------------------------------------------------------


def test_moment_r1():
    s1 = build_quiver(1)
    c, c1, c2 = moment_element(s1)
    a, astar, d1, b1 = (s1.arrow(n) for n in ("a", "a*", "d1", "b1"))
    x1, x1s = -d1, b1
    assert c == a.commutator(astar) + x1.commutator(x1s)


@pytest.mark.parametrize("r", range(1, 7))
def test_moment_decomposition(r):
    spec = build_quiver(r)
    c, c1, c2 = moment_element(spec)
    assert c == c1 + c2
    assert c1 == c.project_block(1, 1)
    assert c2 == c.project_block(2, 2)


@pytest.mark.parametrize("r", range(1, 5))
def test_moment_bd_form(r):
    """The starred-commutator form equals the b/d form with signs."""
    spec = build_quiver(r)
    _, c1, c2 = moment_element(spec)
    a, astar = spec.arrow("a"), spec.arrow("a*")
    want_c1 = a.commutator(astar)
    want_c2 = spec.zero()
    for alpha in range(1, r + 1):
        want_c1 = want_c1 - spec.arrow(f"d{alpha}") * spec.arrow(f"b{alpha}")
        want_c2 = want_c2 + spec.arrow(f"b{alpha}") * spec.arrow(f"d{alpha}")
    assert c1 == want_c1 and c2 == want_c2


def test_moment_all_d():
    spec = build_quiver(2, "all_d")
    c, c1, c2 = moment_element(spec)
    a, astar = spec.arrow("a"), spec.arrow("a*")
    want = a.commutator(astar)
    for alpha in (1, 2):
        want = want + spec.arrow(f"d{alpha}").commutator(spec.arrow(f"b{alpha}"))
    assert c == want


def test_alphabets():
    alT = triangular_alphabet(s3)
    assert alT.names == ("a", "b11", "b21")
    assert alT.expansion("b21") == s3.element("x2") * s3.element("y1")
    alO = op_triangular_alphabet(s3)
    assert alO.names == ("a*", "b11*", "b21*")
    assert alO.expansion("b21*") == s3.element("y1*") * s3.element("x2*")


def test_cycsum_expand_canonicalizes():
    alT = triangular_alphabet(s2)
    f = parse_cycsum("a b11", alT)
    g = parse_cycsum("b11 a", alT)
    assert f == g
    assert f.expand(s2) == g.expand(s2)
