"""GL_r over C[a] (or C[a*]): exact arithmetic, transvection factorization,
and the embedding into the symplectomorphism group.

A matrix with constant nonzero determinant factors as a product of
transvections I + p*e_{alpha,beta} and one invertible constant matrix; each
transvection maps to a triangular (or op-triangular, for the starred
variable) generator conjugated by permutation matrices, realizing the group
isomorphism onto the reduced subgroup generated by those elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import exactmat
from .autom import AffineGL, GeneratorWord, Generator, OpTriangular, Triangular
from .errors import NotUnit, RankMismatch
from .necklace import CycSum, op_triangular_alphabet, triangular_alphabet
from .quiver import QuiverSpec
from .scalars import Gauss, ONE, ZERO


class UniPoly:
    """Univariate polynomial over Gauss scalars in the variable ``a`` or ``a*``."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence[Gauss], var: str = "a"):
        cs = [c if type(c) is Gauss else Gauss(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        if var not in ("a", "a*"):
            raise ValueError("variable tag must be 'a' or 'a*'")
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, *_):
        raise AttributeError("UniPoly is immutable")

    @staticmethod
    def zero(var: str = "a") -> "UniPoly":
        return UniPoly((), var)

    @staticmethod
    def const(c, var: str = "a") -> "UniPoly":
        return UniPoly((c,), var)

    @staticmethod
    def x(var: str = "a") -> "UniPoly":
        return UniPoly((ZERO, ONE), var)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def degree(self) -> int:
        """Degree with deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def lead(self) -> Gauss:
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check(self, other: "UniPoly"):
        if self.var != other.var:
            raise ValueError("mixed polynomial variables")

    def __add__(self, other: "UniPoly") -> "UniPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [ZERO] * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)], self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs], self.var)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            self._check(other)
            if self.is_zero() or other.is_zero():
                return UniPoly.zero(self.var)
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, c in enumerate(self.coeffs):
                for j, d in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + c * d
            return UniPoly(out, self.var)
        c = other if type(other) is Gauss else Gauss(other)
        return UniPoly([c * k for k in self.coeffs], self.var)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.var == other.var
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.coeffs, self.var))

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [ZERO] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        rem = list(self.coeffs)
        dlead = other.lead().inverse()
        dd = other.degree()
        while len(rem) - 1 >= dd and any(not c.is_zero() for c in rem):
            while rem and rem[-1].is_zero():
                rem.pop()
            if len(rem) - 1 < dd:
                break
            k = len(rem) - 1 - dd
            f = rem[-1] * dlead
            q[k] = q[k] + f
            for i, c in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - f * c
            rem.pop()
        return UniPoly(q, self.var), UniPoly(rem, self.var)

    def eval_scalar(self, z: Gauss) -> Gauss:
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def eval_complex(self, z: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + c.to_complex()
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if k == 0:
                parts.append(str(c))
            else:
                v = self.var if k == 1 else f"{self.var}^{k}"
                if c.is_one():
                    parts.append(v)
                elif c == Gauss(-1):
                    parts.append(f"-{v}")
                else:
                    parts.append(f"{c} {v}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"UniPoly({self})"


class PolyMat:
    """Square matrix over C[a] or C[a*]."""

    __slots__ = ("entries", "var", "r")

    def __init__(self, entries: Sequence[Sequence[UniPoly]], var: str | None = None):
        rows = tuple(tuple(row) for row in entries)
        r = len(rows)
        if any(len(row) != r for row in rows):
            raise ValueError("matrix must be square")
        if var is None:
            var = rows[0][0].var if r else "a"
        for row in rows:
            for e in row:
                if e.var != var:
                    raise ValueError("mixed variables in matrix")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "r", r)

    def __setattr__(self, *_):
        raise AttributeError("PolyMat is immutable")

    @staticmethod
    def identity(r: int, var: str = "a") -> "PolyMat":
        return PolyMat(
            [
                [UniPoly.const(ONE if i == j else ZERO, var) for j in range(r)]
                for i in range(r)
            ],
            var,
        )

    @staticmethod
    def from_scalars(m: Sequence[Sequence[Gauss]], var: str = "a") -> "PolyMat":
        return PolyMat([[UniPoly.const(c, var) for c in row] for row in m], var)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __mul__(self, other: "PolyMat") -> "PolyMat":
        if self.var != other.var or self.r != other.r:
            raise ValueError("incompatible matrices")
        r = self.r
        return PolyMat(
            [
                [
                    sum(
                        (self.entries[i][t] * other.entries[t][j] for t in range(r)),
                        UniPoly.zero(self.var),
                    )
                    for j in range(r)
                ]
                for i in range(r)
            ],
            self.var,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMat)
            and self.var == other.var
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.entries, self.var))

    def transpose(self) -> "PolyMat":
        return PolyMat(tuple(zip(*self.entries)), self.var)

    def is_constant(self) -> bool:
        return all(e.is_constant() for row in self.entries for e in row)

    def to_scalars(self) -> exactmat.Mat:
        if not self.is_constant():
            raise NotUnit("matrix is not constant")
        return tuple(
            tuple(e.coeffs[0] if e.coeffs else ZERO for e in row)
            for row in self.entries
        )


def pm_det(A: PolyMat) -> UniPoly:
    """Exact determinant by fraction-free cofactor expansion."""
    return _det(A.entries, A.var)


def _det(rows, var) -> UniPoly:
    r = len(rows)
    if r == 0:
        return UniPoly.const(ONE, var)
    if r == 1:
        return rows[0][0]
    out = UniPoly.zero(var)
    for j in range(r):
        if rows[0][j].is_zero():
            continue
        minor = [
            [rows[i][k] for k in range(r) if k != j] for i in range(1, r)
        ]
        term = rows[0][j] * _det(minor, var)
        out = out + (term if j % 2 == 0 else -term)
    return out


def pm_is_unit(A: PolyMat) -> bool:
    d = pm_det(A)
    return d.is_constant() and not d.is_zero()


def pm_inverse(A: PolyMat) -> PolyMat:
    """Inverse via the adjugate; requires a constant nonzero determinant."""
    d = pm_det(A)
    if not d.is_constant() or d.is_zero():
        raise NotUnit(f"determinant {d} is not a nonzero constant")
    dinv = d.coeffs[0].inverse()
    r = A.r
    cof = []
    for i in range(r):
        row = []
        for j in range(r):
            minor = [
                [A.entries[p][q] for q in range(r) if q != j]
                for p in range(r)
                if p != i
            ]
            m = _det(minor, A.var)
            row.append(m if (i + j) % 2 == 0 else -m)
        cof.append(row)
    # adjugate = transpose of cofactor matrix
    return PolyMat(
        [[cof[j][i] * dinv for j in range(r)] for i in range(r)], A.var
    )


@dataclass(frozen=True)
class Transvection:
    """I + p * e_{alpha,beta} with alpha != beta (1-based indices)."""

    alpha: int
    beta: int
    p: UniPoly

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("transvection needs alpha != beta")

    def matrix(self, r: int) -> PolyMat:
        m = [
            [UniPoly.const(ONE if i == j else ZERO, self.p.var) for j in range(r)]
            for i in range(r)
        ]
        m[self.alpha - 1][self.beta - 1] = self.p
        return PolyMat(m, self.p.var)


@dataclass(frozen=True)
class ScalarMat:
    """Invertible constant matrix factor."""

    T: exactmat.Mat

    def matrix(self, var: str) -> PolyMat:
        return PolyMat.from_scalars(self.T, var)


ElemFactor = Transvection | ScalarMat


def pm_factor(A: PolyMat) -> list[ElemFactor]:
    """Factor a unit-determinant matrix into transvections and one constant.

    Euclidean elimination on rows: within each column the minimal-degree
    pivot reduces the others until a single constant entry survives; the
    final upper triangle is cleared right to left.  The returned product,
    ScalarMat last, reconstructs A exactly.
    """
    if not pm_is_unit(A):
        raise NotUnit("matrix determinant is not a nonzero constant")
    r = A.r
    var = A.var
    m = [[A.entries[i][j] for j in range(r)] for i in range(r)]
    ops: list[Transvection] = []  # row ops applied to m, in order

    def addrow(i: int, j: int, p: UniPoly):
        """row_i += p * row_j (i != j), recorded."""
        if p.is_zero():
            return
        m[i] = [a + p * b for a, b in zip(m[i], m[j])]
        ops.append(Transvection(i + 1, j + 1, p))

    for col in range(r):
        # Euclidean reduction among rows col..r-1 in this column
        while True:
            live = [i for i in range(col, r) if not m[i][col].is_zero()]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda i: (m[i][col].degree(), i))
            for i in live:
                if i == piv:
                    continue
                q, _ = m[i][col].divmod(m[piv][col])
                addrow(i, piv, -q)
        live = [i for i in range(col, r) if not m[i][col].is_zero()]
        if not live:
            raise NotUnit("matrix is singular")  # cannot happen for units
        piv = live[0]
        # the surviving entry divides a unit determinant, hence is constant
        if piv != col:
            addrow(col, piv, UniPoly.const(ONE, var))
            addrow(piv, col, UniPoly.const(Gauss(-1), var))
        # clear below (the pivot is a nonzero constant)
        pinv = m[col][col].coeffs[0].inverse()
        for i in range(col + 1, r):
            if not m[i][col].is_zero():
                addrow(i, col, -(m[i][col] * pinv))
    # clear the strict upper triangle, rightmost pivot first
    for j in range(r - 1, 0, -1):
        pinv = m[j][j].coeffs[0].inverse()
        for i in range(j):
            if not m[i][j].is_zero():
                addrow(i, j, -(m[i][j] * pinv))
    if any(not m[i][i].is_constant() for i in range(r)):
        raise NotUnit("elimination left a non-constant pivot")
    diag = exactmat.mat(
        [
            [m[i][j].coeffs[0] if m[i][j].coeffs else ZERO for j in range(r)]
            for i in range(r)
        ]
    )
    # (E_k ... E_1) A = diag  =>  A = E_1^{-1} E_2^{-1} ... E_k^{-1} diag
    factors: list[ElemFactor] = [Transvection(t.alpha, t.beta, -t.p) for t in ops]
    factors.append(ScalarMat(diag))
    return factors


def factors_product(factors: Sequence[ElemFactor], r: int, var: str) -> PolyMat:
    out = PolyMat.identity(r, var)
    for f in factors:
        out = out * (f.matrix(r) if isinstance(f, Transvection) else f.matrix(var))
    return out


def psi_embed(A: PolyMat, spec: QuiverSpec) -> GeneratorWord:
    """GeneratorWord whose expansion has crossed N matrix equal to A.

    Transvections in the variable ``a`` map to triangular generators built on
    the letter b11 conjugated by permutation matrices; the ``a*`` variable
    uses the op-triangular mirror.  The constant factor maps to an affine
    generator.  The word multiplies as N(word) = product of factor matrices
    in word order, so the factor order is preserved.
    """
    if A.r != spec.r:
        raise RankMismatch(f"matrix rank {A.r} does not match quiver rank {spec.r}")
    if not pm_is_unit(A):
        raise NotUnit("matrix determinant is not a nonzero constant")
    gens: list[Generator] = []
    for f in pm_factor(A):
        gens.extend(_factor_generators(f, spec, A.var))
    return GeneratorWord(tuple(gens))


def _factor_generators(f: ElemFactor, spec: QuiverSpec, var: str) -> list[Generator]:
    r = spec.r
    if isinstance(f, ScalarMat):
        if f.T == exactmat.identity(r):
            return []
        return [AffineGL(f.T)]
    # base transvection position: (2,1) for the a side, (1,2) for the a* side
    base = (2, 1) if var == "a" else (1, 2)
    if var == "a":
        alphabet = triangular_alphabet(spec)
        core: Generator = Triangular(_poly_times_b11(f.p, alphabet))
    else:
        alphabet = op_triangular_alphabet(spec)
        core = OpTriangular(_poly_times_b11(f.p, alphabet))
    if (f.alpha, f.beta) == base:
        return [core]
    # permutation sigma with sigma(alpha) = base[0], sigma(beta) = base[1]
    sigma = _permutation_sending(r, f.alpha - 1, base[0] - 1, f.beta - 1, base[1] - 1)
    P = exactmat.permutation(sigma)
    Pinv = exactmat.inverse(P)
    return [AffineGL(Pinv), core, AffineGL(P)]


def _permutation_sending(r: int, a: int, fa: int, b: int, fb: int) -> list[int]:
    """A permutation (as image list) with a -> fa and b -> fb."""
    img = [-1] * r
    img[a] = fa
    img[b] = fb
    free = [v for v in range(r) if v not in (fa, fb)]
    it = iter(free)
    for k in range(r):
        if img[k] < 0:
            img[k] = next(it)
    return img


def _poly_times_b11(p: UniPoly, alphabet) -> CycSum:
    """The necklace word p(letter0) * letter b11 (or the starred twins)."""
    loop = alphabet.names[0]
    b = alphabet.names[1]
    terms = {}
    for k, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        terms[(loop,) * k + (b,)] = c
    return CycSum(alphabet, terms)
