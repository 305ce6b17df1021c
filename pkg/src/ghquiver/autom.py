"""Symplectomorphisms of the doubled quivers: generators, words, matrices.

Composition convention.  ``compose(psi, sigma)`` is "psi then sigma" acting
on representation points: ``p.(psi then sigma) = (p.psi).sigma``.  On algebra
elements this is the map ``xi -> psi(sigma(xi))``, so a GeneratorWord applied
to points left to right expands by substituting the running images into each
next generator.  Consequently the crossed matrices satisfy

    N^{psi then sigma} = N^psi * psi(N^sigma)
    M^{psi then sigma} = psi(M^sigma) * M^psi

and on the subgroup where the entry action is trivial the N of a word is the
ordinary product of the generators' N matrices in word order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import (
    BlockViolation,
    NotInvertible,
    OddRank,
    OrientationError,
    RankMismatch,
    SpecMismatch,
)
from .exactmat import inverse as _scalar_inverse
from .necklace import (
    Alphabet,
    CycSum,
    LetterPoly,
    moment_element,
    necklace_derivative,
    op_triangular_alphabet,
    triangular_alphabet,
)
from .quiver import (
    NCPoly,
    QuiverSpec,
    decompose_left,
    decompose_right,
    drop_ideal,
    nc_substitute,
)
from .scalars import Gauss, ONE, ZERO


class Endo:
    """Algebra endomorphism given by the image of every arrow."""

    __slots__ = ("spec", "images")

    def __init__(self, spec: QuiverSpec, images: dict[str, NCPoly]):
        full = {}
        for name in spec.arrow_names:
            img = images.get(name)
            if img is None:
                img = spec.arrow(name)
            elif img.spec != spec:
                raise SpecMismatch("image built over a different quiver")
            else:
                blk = img.block_of()
                s, t = spec.endpoints(name)
                if blk is not None and blk != (t, s):
                    raise BlockViolation(
                        f"image of {name!r} lies in block {blk}, expected {(t, s)}"
                    )
            full[name] = img
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "images", full)

    def __setattr__(self, *_):
        raise AttributeError("Endo is immutable")

    @staticmethod
    def identity(spec: QuiverSpec) -> "Endo":
        return Endo(spec, {})

    def apply(self, p: NCPoly) -> NCPoly:
        return nc_substitute(p, self.images)

    def __call__(self, p: NCPoly) -> NCPoly:
        return self.apply(p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Endo):
            return NotImplemented
        return self.spec == other.spec and self.images == other.images

    def __hash__(self):
        return hash((self.spec, frozenset(self.images.items())))

    def is_identity(self) -> bool:
        return all(self.images[n] == self.spec.arrow(n) for n in self.spec.arrow_names)


def compose(psi: Endo, sigma: Endo) -> Endo:
    """The endomorphism acting on points as psi first, then sigma."""
    if psi.spec != sigma.spec:
        raise SpecMismatch("cannot compose endomorphisms over different quivers")
    return Endo(
        psi.spec, {n: psi.apply(sigma.images[n]) for n in psi.spec.arrow_names}
    )


def compose_all(spec: QuiverSpec, endos: Iterable[Endo]) -> Endo:
    out = Endo.identity(spec)
    for e in endos:
        out = compose(out, e)
    return out


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class Triangular:
    """Fixes the unstarred arrows; translates the starred ones by the
    necklace derivatives of ``f`` over the letters {a, b_ij}."""

    f: CycSum

    def expand(self, spec: QuiverSpec) -> Endo:
        return _expand_triangular(spec, self.f, op=False)

    def inverse(self) -> list["Generator"]:
        return [Triangular(-self.f)]


@dataclass(frozen=True)
class OpTriangular:
    """Mirror of Triangular over the letters {a*, b_ij*}."""

    f: CycSum

    def expand(self, spec: QuiverSpec) -> Endo:
        return _expand_triangular(spec, self.f, op=True)

    def inverse(self) -> list["Generator"]:
        return [OpTriangular(-self.f)]


@dataclass(frozen=True)
class AffineSL2:
    """(a, a*) |-> A (a, a*) + B with det A = 1; fixes the cross arrows."""

    A: tuple[tuple[Gauss, Gauss], tuple[Gauss, Gauss]]
    B: tuple[Gauss, Gauss] = (ZERO, ZERO)

    def __post_init__(self):
        (a11, a12), (a21, a22) = self.A
        det = a11 * a22 - a12 * a21
        if not det.is_one():
            raise NotInvertible(f"affine loop matrix must have determinant 1, got {det}")

    def expand(self, spec: QuiverSpec) -> Endo:
        (a11, a12), (a21, a22) = self.A
        b1, b2 = self.B
        a, astar, e1 = spec.arrow("a"), spec.arrow("a*"), spec.idem(1)
        return Endo(
            spec,
            {
                "a": a11 * a + a12 * astar + b1 * e1,
                "a*": a21 * a + a22 * astar + b2 * e1,
            },
        )

    def inverse(self) -> list["Generator"]:
        (a11, a12), (a21, a22) = self.A
        b1, b2 = self.B
        # inverse of x -> Ax + B is x -> A^{-1}x - A^{-1}B; det A = 1
        inv = ((a22, -a12), (-a21, a11))
        ib1 = -(a22 * b1 - a12 * b2)
        ib2 = -(-a21 * b1 + a11 * b2)
        return [AffineSL2(inv, (ib1, ib2))]


@dataclass(frozen=True)
class AffineGL:
    """b_alpha -> sum_beta b_beta T[beta][alpha], d_alpha -> sum (T^-1)[alpha][beta] d_beta."""

    T: tuple[tuple[Gauss, ...], ...]

    def __post_init__(self):
        _scalar_inverse(self.T)  # raises NotInvertible when singular

    def expand(self, spec: QuiverSpec) -> Endo:
        r = spec.r
        T = self.T
        if len(T) != r:
            raise RankMismatch(f"matrix size {len(T)} does not match rank {r}")
        Tinv = _scalar_inverse(T)
        images: dict[str, NCPoly] = {}
        for alpha in range(r):
            img_b = spec.zero()
            img_d = spec.zero()
            for beta in range(r):
                img_b = img_b + T[beta][alpha] * spec.arrow(f"b{beta + 1}")
                img_d = img_d + Tinv[alpha][beta] * spec.arrow(f"d{beta + 1}")
            images[f"b{alpha + 1}"] = img_b
            images[f"d{alpha + 1}"] = img_d
        return Endo(spec, images)

    def inverse(self) -> list["Generator"]:
        return [AffineGL(_scalar_inverse(self.T))]


@dataclass(frozen=True)
class FourierZero:
    """(a, a*) |-> (-a*, a); fixes all cross arrows."""

    def expand(self, spec: QuiverSpec) -> Endo:
        return Endo(
            spec, {"a": -spec.arrow("a*"), "a*": spec.arrow("a")}
        )

    def inverse(self) -> list["Generator"]:
        return [AffineSL2(((ZERO, ONE), (-ONE, ZERO)))]


@dataclass(frozen=True)
class FourierR:
    """For even-rank zigzag quivers: a -> -a*, x_i -> -y_i*, y_i -> -x_i*
    together with a* -> a, x_i* -> y_i, y_i* -> x_i."""

    def expand(self, spec: QuiverSpec) -> Endo:
        if spec.orientation != "zigzag":
            raise OrientationError("the Fourier generator needs the zigzag orientation")
        if spec.r % 2 != 0:
            raise OddRank(f"the Fourier generator needs even rank, got {spec.r}")
        images = {"a": -spec.arrow("a*"), "a*": spec.arrow("a")}
        for i in range(1, spec.r // 2 + 1):
            _fourier_block(spec, images, i)
        return Endo(spec, images)

    def inverse(self) -> list["Generator"]:
        return [FourierR(), FourierR(), FourierR()]  # fourth power is the identity


@dataclass(frozen=True)
class Phi:
    """Acts as the rank-2 Fourier generator on (a, x_1, y_1), fixes the rest."""

    def expand(self, spec: QuiverSpec) -> Endo:
        if spec.orientation != "zigzag":
            raise OrientationError("Phi needs the zigzag orientation")
        if spec.r < 2:
            raise RankMismatch("Phi needs rank >= 2")
        images = {"a": -spec.arrow("a*"), "a*": spec.arrow("a")}
        _fourier_block(spec, images, 1)
        return Endo(spec, images)

    def inverse(self) -> list["Generator"]:
        return [Phi(), Phi(), Phi()]


def _fourier_block(spec: QuiverSpec, images: dict[str, NCPoly], i: int):
    """x_i -> -y_i*, x_i* -> y_i, y_i -> -x_i*, y_i* -> x_i on raw arrows."""
    do, de = f"d{2 * i - 1}", f"d{2 * i}"
    bo, be = f"b{2 * i - 1}", f"b{2 * i}"
    images[do] = spec.arrow(de)  # x_i = -d_odd -> -y_i* = -d_even
    images[bo] = spec.arrow(be)  # x_i* -> y_i
    images[be] = -spec.arrow(bo)  # y_i -> -x_i*
    images[de] = -spec.arrow(do)  # y_i* -> x_i = -d_odd


Generator = Union[Triangular, OpTriangular, AffineSL2, AffineGL, FourierZero, FourierR, Phi]


def _expand_triangular(spec: QuiverSpec, f: CycSum, op: bool) -> Endo:
    """Images of the (op-)triangular symplectomorphism labeled by ``f``."""
    alphabet = op_triangular_alphabet(spec) if op else triangular_alphabet(spec)
    if f.alphabet.names != alphabet.names:
        raise SpecMismatch(
            f"necklace word uses alphabet {f.alphabet.names}, expected {alphabet.names}"
        )
    loop = "a*" if op else "a"
    f = CycSum(alphabet, f.terms)  # rebind to the expansion-bearing alphabet

    us = spec.unstarred_u()
    vs = spec.unstarred_v()
    sus = spec.starred_of_u()
    svs = spec.starred_of_v()

    images: dict[str, NCPoly] = {}
    dloop = necklace_derivative(f, loop).expand(spec)
    if op:
        images["a"] = spec.arrow("a") + dloop
    else:
        images["a*"] = spec.arrow("a*") + dloop

    for i in range(len(us)):
        for j in range(len(vs)):
            dname = f"b{i + 1}{j + 1}*" if op else f"b{i + 1}{j + 1}"
            der = necklace_derivative(f, dname).expand(spec)
            if der.is_zero():
                continue
            if not op:
                # u_i* -> u_i* + v_j * der ;  v_j* -> v_j* + der * u_i
                su_sign, su = sus[i]
                sv_sign, sv = svs[j]
                v_sign, v = vs[j]
                u_sign, u = us[i]
                img = images.get(su, spec.arrow(su))
                images[su] = img + Gauss(su_sign * v_sign) * (spec.arrow(v) * der)
                img = images.get(sv, spec.arrow(sv))
                images[sv] = img + Gauss(sv_sign * u_sign) * (der * spec.arrow(u))
            else:
                # u_i -> u_i + der * v_j* ;  v_j -> v_j + u_i* * der
                u_sign, u = us[i]
                v_sign, v = vs[j]
                sv_sign, sv = svs[j]
                su_sign, su = sus[i]
                img = images.get(u, spec.arrow(u))
                images[u] = img + Gauss(u_sign * sv_sign) * (der * spec.arrow(sv))
                img = images.get(v, spec.arrow(v))
                images[v] = img + Gauss(v_sign * su_sign) * (spec.arrow(su) * der)
    return Endo(spec, images)


def build_generator(g: Generator, spec: QuiverSpec) -> Endo:
    return g.expand(spec)


@dataclass(frozen=True)
class GeneratorWord:
    """Finite sequence of generators, applied to points left to right."""

    gens: tuple[Generator, ...] = ()

    @staticmethod
    def of(*gens: Generator) -> "GeneratorWord":
        return GeneratorWord(tuple(gens))

    def __len__(self):
        return len(self.gens)

    def __add__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.gens + other.gens)

    def expand(self, spec: QuiverSpec) -> Endo:
        return compose_all(spec, (g.expand(spec) for g in self.gens))

    def inverse(self) -> "GeneratorWord":
        out: list[Generator] = []
        for g in reversed(self.gens):
            out.extend(g.inverse())
        return GeneratorWord(tuple(out))


def invert_word(w: GeneratorWord) -> GeneratorWord:
    return w.inverse()


# ---------------------------------------------------------------------------
# symplecticity, reduction, crossed matrices


def is_symplectic(psi: Endo) -> tuple[bool, NCPoly]:
    """Whether psi fixes the moment element; also returns the residual."""
    c, _, _ = moment_element(psi.spec)
    residual = psi.apply(c) - c
    return residual.is_zero(), residual


def is_reduced(psi: Endo) -> bool:
    """True when the images of a and a* reduce to a and a* modulo the ideal
    generated by e2 and the cross arrows."""
    spec = psi.spec
    return (
        drop_ideal(psi.images["a"]) == spec.arrow("a")
        and drop_ideal(psi.images["a*"]) == spec.arrow("a*")
    )


def crossed_N(psi: Endo) -> list[list[NCPoly]]:
    """N^psi with psi(b_alpha) = sum_beta b_beta N[beta][alpha]."""
    spec = psi.spec
    r = spec.r
    cols = [decompose_right(psi.images[f"b{alpha + 1}"]) for alpha in range(r)]
    return [[cols[alpha][beta] for alpha in range(r)] for beta in range(r)]


def crossed_M(psi: Endo) -> list[list[NCPoly]]:
    """M^psi with psi(d_alpha) = sum_beta M[alpha][beta] d_beta."""
    r = psi.spec.r
    return [decompose_left(psi.images[f"d{alpha + 1}"]) for alpha in range(r)]


def mat_apply(psi: Endo, m: Sequence[Sequence[NCPoly]]) -> list[list[NCPoly]]:
    """Entrywise action of psi on a matrix over A1."""
    return [[psi.apply(e) for e in row] for row in m]


def mat_mul(a: Sequence[Sequence[NCPoly]], b: Sequence[Sequence[NCPoly]]) -> list[list[NCPoly]]:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_identity(spec: QuiverSpec) -> list[list[NCPoly]]:
    r = spec.r
    return [
        [spec.idem(1) if i == j else spec.zero() for j in range(r)] for i in range(r)
    ]


def mat_eq(a: Sequence[Sequence[NCPoly]], b: Sequence[Sequence[NCPoly]]) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


# ---------------------------------------------------------------------------
# the o isomorphism and the Q0 projection


def o_map(f: CycSum, spec: QuiverSpec) -> OpTriangular:
    """Unique abelian-group isomorphism sending Lambda(f) to the op-triangular
    side: f(a, b_ij) -> -f(a*, b_ij*)."""
    src = triangular_alphabet(spec)
    dst = op_triangular_alphabet(spec)
    mapping = {n: f"{n}*" for n in src.names}
    if f.alphabet.names != src.names:
        raise SpecMismatch("o_map expects a necklace word over {a, b_ij}")
    return OpTriangular(-(f.rename(dst, mapping)))


def fourier_tilde(f: CycSum, spec: QuiverSpec) -> OpTriangular:
    """The op-triangular generator realized by Fourier conjugation.

    Conjugating Lambda(f) by the even-rank Fourier generator substitutes
    x_i y_j -> y_i* x_j*, i.e. it renames b_ij to the starred letter with the
    indices transposed; on the letters b_ii (in particular the whole r = 2
    case) this agrees with o_map.
    """
    src = triangular_alphabet(spec)
    dst = op_triangular_alphabet(spec)
    if f.alphabet.names != src.names:
        raise SpecMismatch("fourier_tilde expects a necklace word over {a, b_ij}")

    def star(name: str) -> str:
        if name == "a":
            return "a*"
        return f"b{name[2]}{name[1]}*"

    return OpTriangular(
        -CycSum(dst, {tuple(star(n) for n in w): c for w, c in f.terms.items()})
    )


def project_Q0(psi: Endo) -> tuple[NCPoly, NCPoly]:
    """Images of a and a* modulo the ideal generated by e2 and d, b arrows."""
    return drop_ideal(psi.images["a"]), drop_ideal(psi.images["a*"])


def q0_part(g: Generator, spec: QuiverSpec) -> list[Generator]:
    """Image of one generator under the projection to the loop quiver,
    re-extended to the full quiver (identity on the cross arrows)."""
    if isinstance(g, Triangular):
        fa = g.f.restrict_to(("a",))
        return [] if fa.is_zero() else [Triangular(fa)]
    if isinstance(g, OpTriangular):
        fa = g.f.restrict_to(("a*",))
        return [] if fa.is_zero() else [OpTriangular(fa)]
    if isinstance(g, AffineSL2):
        return [g]
    if isinstance(g, AffineGL):
        return []
    if isinstance(g, (FourierZero, FourierR, Phi)):
        return [FourierZero()]
    raise TypeError(f"unknown generator {g!r}")


def word_q0_factorization(
    w: GeneratorWord, spec: QuiverSpec
) -> tuple[GeneratorWord, GeneratorWord]:
    """Split a word as (reduced part, loop-quiver part).

    Returns (kappa, pi) with expand(w) = compose(expand(kappa), expand(pi)),
    kappa reduced and pi supported on the loops only; pi is the image of the
    word under the quotient by the ideal generated by e2 and the cross arrows.
    """
    pi_gens: list[Generator] = []
    for g in w.gens:
        pi_gens.extend(q0_part(g, spec))
    pi = GeneratorWord(tuple(pi_gens))
    kappa = w + pi.inverse()
    return kappa, pi
