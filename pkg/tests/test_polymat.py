import random
from fractions import Fraction

import pytest

from ghquiver import exactmat
from ghquiver.autom import crossed_N, is_reduced, is_symplectic, mat_eq
from ghquiver.errors import NotUnit, RankMismatch
from ghquiver.polymat import (
    PolyMat,
    ScalarMat,
    Transvection,
    UniPoly,
    factors_product,
    pm_det,
    pm_factor,
    pm_inverse,
    pm_is_unit,
    psi_embed,
)
from ghquiver.quiver import build_quiver
from ghquiver.scalars import Gauss, ONE, ZERO


def rand_poly(rng, var, maxdeg=3):
    deg = rng.randint(0, maxdeg)
    return UniPoly(
        [Gauss(Fraction(rng.randint(-3, 3), rng.randint(1, 2))) for _ in range(deg + 1)],
        var,
    )


def rand_gl(rng, r, var, factors=3):
    A = PolyMat.identity(r, var)
    for _ in range(rng.randint(1, factors)):
        i, j = rng.randint(1, r), rng.randint(1, r)
        if i == j:
            continue
        A = A * Transvection(i, j, rand_poly(rng, var, 2)).matrix(r)
    d = [Gauss(rng.choice([1, 2, -1, 3])) for _ in range(r)]
    D = exactmat.mat([[d[i] if i == j else 0 for j in range(r)] for i in range(r)])
    return A * ScalarMat(D).matrix(var)


def poly_as_nc(spec, p):
    loop = spec.arrow("a") if p.var == "a" else spec.arrow("a*")
    val, pw = spec.zero(), spec.idem(1)
    for c in p.coeffs:
        val = val + c * pw
        pw = pw * loop
    return val


def test_unipoly_arithmetic():
    x = UniPoly.x("a")
    p = x * x + Gauss(2) * x + UniPoly.const(1, "a")
    q, rem = p.divmod(x + UniPoly.const(1, "a"))
    assert q == x + UniPoly.const(1, "a") and rem.is_zero()
    assert p.eval_scalar(Gauss(1)) == Gauss(4)


def test_det_examples():
    assert pm_det(PolyMat.identity(3)) == UniPoly.const(ONE, "a")
    t = Transvection(2, 1, UniPoly([ZERO, ONE], "a"))
    assert pm_det(t.matrix(4)) == UniPoly.const(ONE, "a")


def test_inverse_transvection():
    t = Transvection(2, 1, rand_poly(random.Random(1), "a"))
    inv = pm_inverse(t.matrix(3))
    assert inv == Transvection(2, 1, -t.p).matrix(3)


def test_inverse_requires_unit():
    x = UniPoly.x("a")
    A = PolyMat([[x, UniPoly.zero("a")], [UniPoly.zero("a"), UniPoly.const(1, "a")]])
    with pytest.raises(NotUnit):
        pm_inverse(A)
    with pytest.raises(NotUnit):
        pm_factor(A)


def test_factor_examples(rng):
    # [[1, p], [0, 1]] -> a single transvection
    p = rand_poly(rng, "a")
    A = Transvection(1, 2, p).matrix(2)
    fs = pm_factor(A)
    assert factors_product(fs, 2, "a") == A
    # rotation matrix -> three transvections and a scalar
    J = PolyMat.from_scalars(exactmat.mat([[0, 1], [-1, 0]]), "a")
    fs = pm_factor(J)
    assert factors_product(fs, 2, "a") == J
    # diagonal -> scalar factor only
    D = PolyMat.from_scalars(exactmat.mat([[2, 0, 0], [0, 1, 0], [0, 0, 3]]), "a")
    fs = pm_factor(D)
    assert len(fs) == 1 and isinstance(fs[0], ScalarMat)


def test_factor_roundtrip_random(rng):
    for _ in range(100):
        r = rng.randint(1, 4)
        var = rng.choice(["a", "a*"])
        A = rand_gl(rng, r, var)
        assert factors_product(pm_factor(A), r, var) == A


def test_psi_embed_transvection_is_single_lambda():
    spec = build_quiver(3)
    p = UniPoly([Gauss(1), Gauss(2)], "a")
    w = psi_embed(Transvection(2, 1, p).matrix(3), spec)
    from ghquiver.autom import Triangular

    assert len(w) == 1 and isinstance(w.gens[0], Triangular)


def test_psi_embed_identity():
    spec = build_quiver(3)
    w = psi_embed(PolyMat.identity(3), spec)
    assert w.expand(spec).is_identity()


def test_psi_embed_rank_mismatch():
    with pytest.raises(RankMismatch):
        psi_embed(PolyMat.identity(2), build_quiver(3))


def test_psi_embed_contract(rng):
    for _ in range(10):
        r = rng.randint(2, 4)
        spec = build_quiver(r)
        var = rng.choice(["a", "a*"])
        A = rand_gl(rng, r, var)
        endo = psi_embed(A, spec).expand(spec)
        N = crossed_N(endo)
        expected = [[poly_as_nc(spec, A.entries[i][j]) for j in range(r)] for i in range(r)]
        assert mat_eq(N, expected)
        assert is_symplectic(endo)[0]
        assert is_reduced(endo)


def test_psi_embed_homomorphism(rng):
    """Under the point-order convention the word concatenation multiplies the
    crossed matrices in word order: N(emb(A) then emb(B)) = A * B."""
    spec = build_quiver(3)
    for _ in range(5):
        A = rand_gl(rng, 3, "a", 2)
        B = rand_gl(rng, 3, "a", 2)
        word = psi_embed(A, spec) + psi_embed(B, spec)
        N = crossed_N(word.expand(spec))
        AB = A * B
        expected = [
            [poly_as_nc(spec, AB.entries[i][j]) for j in range(3)] for i in range(3)
        ]
        assert mat_eq(N, expected)


def test_psi_embed_injectivity_witness(rng):
    spec = build_quiver(3)
    for _ in range(8):
        A = rand_gl(rng, 3, "a", 2)
        if A == PolyMat.identity(3, "a"):
            continue
        assert not psi_embed(A, spec).expand(spec).is_identity()
