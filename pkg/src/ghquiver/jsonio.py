"""JSON schemas for the external surfaces.

RepPoint:        {"n":…, "r":…, "tau":[re,im], "X":[[[re,im],…]], "Y":…, "v":…, "w":…}
GeneratorWord:   {"gens":[{"kind":"triangular","f":"expr"},
                          {"kind":"op_triangular","f":"expr"},
                          {"kind":"affine_sl2","A":[["0","-1"],["1","0"]],"B":["0","0"]},
                          {"kind":"affine_gl","T":[["1","0"],["2","1"]]},
                          {"kind":"fourier_r"}, {"kind":"fourier_zero"}, {"kind":"phi"}]}
NavTrace:        {"word":…, "steps":[{"kind":…, "residual":…, …}], "start":…, "final":…}

Scalar matrix entries use the expression coefficient syntax, so exact values
survive the round trip.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import numpy as np

from .autom import (
    AffineGL,
    AffineSL2,
    FourierR,
    FourierZero,
    Generator,
    GeneratorWord,
    OpTriangular,
    Phi,
    Triangular,
)
from .errors import ParseError
from .exprs import cycsum_str, parse_cycsum, parse_letterpoly
from .navigator import NavTrace
from .necklace import op_triangular_alphabet, triangular_alphabet
from .quiver import QuiverSpec
from .repspace import RepPoint
from .scalars import Gauss


# -- complex / matrices ------------------------------------------------------


def complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def cmat_to_json(m: np.ndarray) -> list:
    return [[complex_to_json(complex(z)) for z in row] for row in np.atleast_2d(m)]


def cmat_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)


def reppoint_to_json(pt: RepPoint) -> dict:
    return {
        "n": pt.n,
        "r": pt.r,
        "tau": complex_to_json(pt.tau),
        "X": cmat_to_json(pt.X),
        "Y": cmat_to_json(pt.Y),
        "v": cmat_to_json(pt.v),
        "w": cmat_to_json(pt.w),
    }


def reppoint_from_json(data: dict, tol: float = 1e-9) -> RepPoint:
    return RepPoint(
        int(data["n"]),
        int(data["r"]),
        complex(*data["tau"]),
        cmat_from_json(data["X"]),
        cmat_from_json(data["Y"]),
        cmat_from_json(data["v"]),
        cmat_from_json(data["w"]),
        tol,
    )


# -- exact scalars -------------------------------------------------------------


def gauss_to_json(c: Gauss) -> str:
    return str(c)


def gauss_from_json(text: str) -> Gauss:
    from .necklace import abstract_alphabet

    lp = parse_letterpoly(str(text), abstract_alphabet([]))
    if list(lp.terms) not in ([], [()]):
        raise ParseError(f"not a scalar literal: {text!r}")
    return lp.terms.get((), Gauss(0))


def scalar_matrix_to_json(T) -> list[list[str]]:
    return [[gauss_to_json(c) for c in row] for row in T]


def scalar_matrix_from_json(data) -> tuple[tuple[Gauss, ...], ...]:
    return tuple(tuple(gauss_from_json(c) for c in row) for row in data)


# -- generators ---------------------------------------------------------------


def generator_to_json(g: Generator) -> dict:
    if isinstance(g, Triangular):
        return {"kind": "triangular", "f": cycsum_str(g.f)}
    if isinstance(g, OpTriangular):
        return {"kind": "op_triangular", "f": cycsum_str(g.f)}
    if isinstance(g, AffineSL2):
        return {
            "kind": "affine_sl2",
            "A": scalar_matrix_to_json(g.A),
            "B": [gauss_to_json(c) for c in g.B],
        }
    if isinstance(g, AffineGL):
        return {"kind": "affine_gl", "T": scalar_matrix_to_json(g.T)}
    if isinstance(g, FourierR):
        return {"kind": "fourier_r"}
    if isinstance(g, FourierZero):
        return {"kind": "fourier_zero"}
    if isinstance(g, Phi):
        return {"kind": "phi"}
    raise TypeError(f"unknown generator {g!r}")


def generator_from_json(data: dict, spec: QuiverSpec) -> Generator:
    kind = data["kind"]
    if kind == "triangular":
        return Triangular(parse_cycsum(data["f"], triangular_alphabet(spec)))
    if kind == "op_triangular":
        return OpTriangular(parse_cycsum(data["f"], op_triangular_alphabet(spec)))
    if kind == "affine_sl2":
        A = scalar_matrix_from_json(data["A"])
        B = tuple(gauss_from_json(c) for c in data.get("B", ["0", "0"]))
        return AffineSL2((tuple(A[0]), tuple(A[1])), (B[0], B[1]))
    if kind == "affine_gl":
        return AffineGL(scalar_matrix_from_json(data["T"]))
    if kind == "fourier_r":
        return FourierR()
    if kind == "fourier_zero":
        return FourierZero()
    if kind == "phi":
        return Phi()
    raise ParseError(f"unknown generator kind {kind!r}")


def word_to_json(w: GeneratorWord) -> dict:
    return {"gens": [generator_to_json(g) for g in w.gens]}


def word_from_json(data: dict, spec: QuiverSpec) -> GeneratorWord:
    return GeneratorWord(tuple(generator_from_json(g, spec) for g in data["gens"]))


# -- traces ---------------------------------------------------------------------


def trace_to_json(tr: NavTrace) -> dict:
    return {
        "start": reppoint_to_json(tr.start),
        "word": word_to_json(tr.word),
        "steps": tr.steps,
        "final": reppoint_to_json(tr.final) if tr.final is not None else None,
    }


def trace_from_json(data: dict, spec: QuiverSpec) -> NavTrace:
    tr = NavTrace(
        start=reppoint_from_json(data["start"]),
        word=word_from_json(data["word"], spec),
        steps=list(data.get("steps", [])),
    )
    if data.get("final") is not None:
        tr.final = reppoint_from_json(data["final"])
    return tr
