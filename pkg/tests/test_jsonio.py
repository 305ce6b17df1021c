import json

import numpy as np

from ghquiver import jsonio
from ghquiver.autom import (
    AffineGL,
    AffineSL2,
    FourierR,
    FourierZero,
    GeneratorWord,
    OpTriangular,
    Phi,
    Triangular,
)
from ghquiver.exprs import parse_cycsum
from ghquiver.navigator import reduce_to_rank1
from ghquiver.necklace import op_triangular_alphabet, triangular_alphabet
from ghquiver.quiver import build_quiver
from ghquiver.repspace import random_fiber_point
from ghquiver.scalars import Gauss, ONE, ZERO

s2 = build_quiver(2)


def test_point_roundtrip():
    pt = random_fiber_point(3, 2, tau=0.5 - 0.25j, seed=7)
    data = json.loads(json.dumps(jsonio.reppoint_to_json(pt)))
    back = jsonio.reppoint_from_json(data)
    assert np.array_equal(back.X, pt.X)
    assert np.array_equal(back.w, pt.w)
    assert back.tau == pt.tau


def test_word_roundtrip():
    alT = triangular_alphabet(s2)
    alO = op_triangular_alphabet(s2)
    word = GeneratorWord.of(
        Triangular(parse_cycsum("1/2 a b11 + a^2", alT)),
        OpTriangular(parse_cycsum("(1/3-2i) a* b11*", alO)),
        AffineSL2(((ZERO, -ONE), (ONE, ZERO)), (Gauss(2), ZERO)),
        AffineGL(((ONE, Gauss(3)), (ZERO, ONE))),
        FourierZero(),
        FourierR(),
        Phi(),
    )
    data = json.loads(json.dumps(jsonio.word_to_json(word)))
    back = jsonio.word_from_json(data, s2)
    assert back == word
    assert back.expand(s2) == word.expand(s2)


def test_trace_roundtrip():
    spec = build_quiver(3)
    pt = random_fiber_point(2, 3, tau=1.0, seed=11)
    tr = reduce_to_rank1(pt, spec)
    data = json.loads(json.dumps(jsonio.trace_to_json(tr)))
    back = jsonio.trace_from_json(data, spec)
    assert back.word == tr.word
    assert np.array_equal(back.final.v, tr.final.v)
    assert len(back.steps) == len(tr.steps)


def test_gauss_scalar_strings():
    for c in (Gauss(3), Gauss(-1, 2), Gauss(0, -5), Gauss(1, 0) / Gauss(3)):
        assert jsonio.gauss_from_json(jsonio.gauss_to_json(c)) == c
