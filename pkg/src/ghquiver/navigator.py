"""Constructive reduction of fiber points to rank 1 and point connection.

The reduction follows the two half-steps per rank: fix the denominators of an
interpolation problem with an affine shear, solve it at the eigenvalues of X
(or Y), and translate with a triangular (or op-triangular) generator built on
the active b_{ij} letter.  The working representative is never gauged;
eigenbases enter only through the interpolation data, so replaying the
emitted word from the start point reproduces the final point exactly.

Per stage the two half-steps share one composite letter, so the second
half-step's loop translation evaluates to zero through the column or row the
first half-step killed: the a-side loop matrix X never moves during a
reduction, and the second-half denominator conditions are rescued by the
fiber identity restricted to the still-alive indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .autom import (
    AffineGL,
    FourierZero,
    Generator,
    GeneratorWord,
    OpTriangular,
    Triangular,
)
from .errors import (
    BadFiberPoint,
    NodesCollide,
    NotConnectedAtRank1,
    NotInR,
    RankMismatch,
    RegularizationFailed,
)
from .necklace import CycSum, op_triangular_alphabet, triangular_alphabet
from .polymat import UniPoly
from .quiver import QuiverSpec
from .repspace import (
    RepPoint,
    act,
    is_regular_semisimple,
    moment_residual,
    orbit_equal,
)
from .scalars import Gauss


@dataclass
class NavTrace:
    """Replayable log of one navigation run."""

    start: RepPoint
    word: GeneratorWord = field(default_factory=GeneratorWord)
    steps: list[dict] = field(default_factory=list)
    final: RepPoint | None = None

    def log(self, kind: str, pt: RepPoint, **data):
        entry = {"kind": kind, "residual": moment_residual(pt)}
        entry.update(data)
        self.steps.append(entry)


def replay(start: RepPoint, word: GeneratorWord, spec: QuiverSpec) -> RepPoint:
    return act(start, word, spec)


# ---------------------------------------------------------------------------
# numeric -> exact helpers


def interpolate(nodes, values, var: str = "a") -> UniPoly:
    """Unique polynomial of degree <= n-1 through the given complex points.

    Newton divided differences expanded to the monomial basis; coefficients
    are stored exactly (floats are rationals).
    """
    xs = [complex(z) for z in nodes]
    ys = [complex(z) for z in values]
    n = len(xs)
    if n == 0:
        return UniPoly.zero(var)
    gap_tol = 1e-12 * (1.0 + max(abs(z) for z in xs))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(xs[i] - xs[j]) <= gap_tol:
                raise NodesCollide(f"nodes {i} and {j} coincide")
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand newton form: p = c0 + (x-x0)(c1 + (x-x1)(...))
    poly = [0j] * n
    for k in range(n - 1, -1, -1):
        # poly <- poly * (x - x_k) + coef[k]
        shifted = [0j] + poly[:-1]
        poly = [s - xs[k] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[k]
        if k == 0:
            break
        poly = poly  # alignment only
    # re-run cleanly (the loop above is easier to state directly):
    poly = [0j]
    for k in range(n - 1, -1, -1):
        new = [0j] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] += c
            new[i] -= xs[k] * c
        new[0] += coef[k]
        poly = new
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return UniPoly([Gauss.from_complex(c) for c in poly], var)


def _antiderivative_necklace(p: UniPoly, alphabet) -> CycSum:
    """The necklace F(letter) with F' = p; exact (divides by k+1)."""
    loop = alphabet.names[0]
    terms = {}
    for k, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        terms[(loop,) * (k + 1)] = c * Gauss(Fraction(1, k + 1))
    return CycSum(alphabet, terms)


def _poly_times_letter(p: UniPoly, alphabet, letter: str) -> CycSum:
    terms = {}
    for k, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        terms[(alphabet.names[0],) * k + (letter,)] = c
    return CycSum(alphabet, terms)


# ---------------------------------------------------------------------------
# primitive moves


def ensure_primed(pt: RepPoint, spec: QuiverSpec) -> tuple[RepPoint, GeneratorWord]:
    """Make X regular semisimple, using the loop Fourier move when only Y is."""
    if is_regular_semisimple(pt.X):
        return pt, GeneratorWord()
    if is_regular_semisimple(pt.Y):
        w = GeneratorWord.of(FourierZero())
        return act(pt, w, spec), w
    raise NotInR("neither X nor Y is regular semisimple")


def regularize(
    pt: RepPoint, spec: QuiverSpec, which: str = "Y"
) -> tuple[RepPoint, GeneratorWord]:
    """Shift Y by a polynomial in X (or X by a polynomial in Y) until the
    target matrix is regular semisimple; Gershgorin separation with escalating
    gap constant, 10 attempts."""
    if which not in ("X", "Y"):
        raise ValueError("which must be 'X' or 'Y'")
    target = pt.Y if which == "Y" else pt.X
    if is_regular_semisimple(target):
        return pt, GeneratorWord()
    basis_mat = pt.X if which == "Y" else pt.Y
    if not is_regular_semisimple(basis_mat):
        raise RegularizationFailed("no regular semisimple companion matrix")
    lam, V = np.linalg.eig(basis_mat)
    Vinv = np.linalg.inv(V)
    moved = Vinv @ target @ V
    K = 2.0 * pt.n * float(np.amax(np.abs(moved).sum(axis=1))) + 1.0
    for _ in range(10):
        shift = interpolate(lam, [K * (i + 1) for i in range(pt.n)],
                            "a" if which == "Y" else "a*")
        if which == "Y":
            gen: Generator = Triangular(
                _antiderivative_necklace(shift, triangular_alphabet(spec))
            )
        else:
            gen = OpTriangular(
                _antiderivative_necklace(shift, op_triangular_alphabet(spec))
            )
        word = GeneratorWord.of(gen)
        out = act(pt, word, spec)
        if is_regular_semisimple(out.Y if which == "Y" else out.X):
            return out, word
        K *= 2.0
    raise RegularizationFailed(f"could not separate the spectrum of {which}")


def _shear_candidates(n: int, r: int):
    yield from range(1, n * r * 10 + 1)


def denominator_fix(
    pt: RepPoint,
    target: str,
    index: int,
    spec: QuiverSpec,
    basis: np.ndarray | None = None,
    active: int | None = None,
    exclude: tuple[int, ...] = (),
    nz_factor: float = 1e-8,
) -> tuple[RepPoint, GeneratorWord]:
    """Make a w row (or v column) entrywise nonzero with one affine shear.

    ``target`` is ``"w_row"`` or ``"v_col"``; ``index`` is 1-based.  The
    nonzero condition is read in the given eigenbasis (w @ basis for rows,
    basis^-1 @ v for columns; identity by default).  The shear only mixes
    indices <= ``active`` and never the 1-based indices in ``exclude``, so
    already-killed rows and columns stay dead.  Deterministic search over
    integer shear parameters; BadFiberPoint when no candidate clears the
    tolerance.
    """
    if target not in ("w_row", "v_col"):
        raise ValueError("target must be 'w_row' or 'v_col'")
    r = pt.r
    act_r = r if active is None else active
    if not (1 <= index <= act_r):
        raise RankMismatch(f"index {index} outside the active range")
    ell = index - 1
    mix = [b for b in range(act_r) if b != ell and (b + 1) not in exclude]

    if target == "w_row":
        base = pt.w if basis is None else pt.w @ basis
        mat0 = base[ell, :]
        nz_tol = nz_factor * (1.0 + float(np.linalg.norm(base)))
    else:
        base = pt.v if basis is None else np.linalg.solve(basis, pt.v)
        mat0 = base[:, ell]
        nz_tol = nz_factor * (1.0 + float(np.linalg.norm(base)))
    if float(np.amin(np.abs(mat0))) > nz_tol:
        return pt, GeneratorWord()
    if not mix:
        raise BadFiberPoint(
            f"no shear room to fix {target} {index} (frozen indices)"
        )

    best = None
    for t in _shear_candidates(pt.n, r):
        if target == "w_row":
            # row ell += sum_b t^pos * row b, read in the basis
            row = base[ell, :].copy()
            for pos, b in enumerate(mix, start=1):
                row = row + (t ** pos) * base[b, :]
            quality = float(np.amin(np.abs(row)))
        else:
            col = base[:, ell].copy()
            for pos, b in enumerate(mix, start=1):
                col = col + (t ** pos) * base[:, b]
            quality = float(np.amin(np.abs(col)))
        if best is None or quality > best[0]:
            best = (quality, t)
        if t >= 10 and best[0] > nz_tol:
            break
    if best is None or best[0] <= nz_tol:
        raise BadFiberPoint(f"could not make {target} {index} entrywise nonzero")
    t = best[1]

    M = np.eye(r, dtype=complex)
    if target == "w_row":
        for pos, b in enumerate(mix, start=1):
            M[ell, b] = t ** pos
        # w -> M w requires the affine parameter T with T^t = M
        T = M.T
    else:
        for pos, b in enumerate(mix, start=1):
            M[b, ell] = t ** pos
        # v -> v M requires T^t = M^{-1}
        T = np.linalg.inv(M).T
    T_exact = tuple(
        tuple(Gauss(Fraction(round(float(T[i, j].real)))) for j in range(r))
        for i in range(r)
    )
    word = GeneratorWord.of(AffineGL(T_exact))
    return act(pt, word, spec), word


# ---------------------------------------------------------------------------
# rank reduction


def _eig_sorted(m: np.ndarray):
    lam, V = np.linalg.eig(m)
    order = np.lexsort((lam.imag, lam.real))
    return lam[order], V[:, order]


def reduce_rank_once(
    pt: RepPoint, spec: QuiverSpec, active_r: int | None = None, trace: NavTrace | None = None
) -> tuple[RepPoint, GeneratorWord]:
    """Kill v[:, active_r] and w[active_r, :] with generators supported on the
    active sub-quiver; returns the moved point and the word used."""
    r = pt.r if active_r is None else active_r
    if r < 2:
        raise RankMismatch("rank reduction needs active rank >= 2")
    if trace is None:
        trace = NavTrace(pt)
    word = GeneratorWord()
    already = max(
        float(np.amax(np.abs(pt.v[:, r - 1]))), float(np.amax(np.abs(pt.w[r - 1, :])))
    )
    if already <= 1e-12 * pt.scale():
        trace.log("already_killed", pt, rank=r)
        return pt, word

    def push(w: GeneratorWord, p: RepPoint, kind: str, **data):
        nonlocal word
        word = word + w
        trace.log(kind, p, **data)
        return p

    alT = triangular_alphabet(spec)
    alO = op_triangular_alphabet(spec)

    if r % 2 == 0:
        s = r // 2
        # half 1: kill v[:, 2s] interpolating in the X eigenbasis
        if not is_regular_semisimple(pt.X):
            pt2, w = regularize(pt, spec, "X")
            pt = push(w, pt2, "regularize_X")
        lam, V = _eig_sorted(pt.X)
        pt2, w = denominator_fix(
            pt, "v_col", 2 * s - 1, spec, basis=V, active=r
        )
        pt = push(w, pt2, "shear_v", column=2 * s - 1)
        vt = np.linalg.solve(V, pt.v)
        p = interpolate(lam, vt[:, 2 * s - 1] / vt[:, 2 * s - 2], "a")
        gen = Triangular(_poly_times_letter(p, alT, f"b{s}{s}"))
        w = GeneratorWord.of(gen)
        pt = push(w, act(pt, w, spec), "kill_v", column=2 * s, degree=p.degree())
        # half 2: kill w[2s, :] interpolating in the Y eigenbasis
        if not is_regular_semisimple(pt.Y):
            pt2, w = regularize(pt, spec, "Y")
            pt = push(w, pt2, "regularize_Y")
        mu, U = _eig_sorted(pt.Y)
        pt2, w = denominator_fix(
            pt, "w_row", 2 * s - 1, spec, basis=U, active=r, exclude=(2 * s,)
        )
        pt = push(w, pt2, "shear_w", row=2 * s - 1)
        wt = pt.w @ U
        q = interpolate(mu, -wt[2 * s - 1, :] / wt[2 * s - 2, :], "a*")
        gen = OpTriangular(_poly_times_letter(q, alO, f"b{s}{s}*"))
        w = GeneratorWord.of(gen)
        pt = push(w, act(pt, w, spec), "kill_w", row=2 * s, degree=q.degree())
    else:
        s = (r - 1) // 2
        # half 1: kill w[2s+1, :] interpolating in the X eigenbasis
        if not is_regular_semisimple(pt.X):
            pt2, w = regularize(pt, spec, "X")
            pt = push(w, pt2, "regularize_X")
        lam, V = _eig_sorted(pt.X)
        pt2, w = denominator_fix(pt, "w_row", 2 * s, spec, basis=V, active=r)
        pt = push(w, pt2, "shear_w", row=2 * s)
        wt = pt.w @ V
        p = interpolate(lam, -wt[2 * s, :] / wt[2 * s - 1, :], "a")
        gen = Triangular(_poly_times_letter(p, alT, f"b{s + 1}{s}"))
        w = GeneratorWord.of(gen)
        pt = push(w, act(pt, w, spec), "kill_w", row=2 * s + 1, degree=p.degree())
        # half 2: kill v[:, 2s+1] interpolating in the Y eigenbasis; the dead
        # w row makes the a-translation of the generator evaluate to zero, so
        # X never moves, and it keeps the fiber identity on indices <= 2s
        if not is_regular_semisimple(pt.Y):
            pt2, w = regularize(pt, spec, "Y")
            pt = push(w, pt2, "regularize_Y")
        mu, U = _eig_sorted(pt.Y)
        pt2, w = denominator_fix(
            pt, "v_col", 2 * s, spec, basis=U, active=r, exclude=(2 * s + 1,)
        )
        pt = push(w, pt2, "shear_v", column=2 * s)
        vt = np.linalg.solve(U, pt.v)
        q = interpolate(mu, vt[:, 2 * s] / vt[:, 2 * s - 1], "a*")
        gen = OpTriangular(_poly_times_letter(q, alO, f"b{s + 1}{s}*"))
        w = GeneratorWord.of(gen)
        pt = push(w, act(pt, w, spec), "kill_v", column=2 * s + 1, degree=q.degree())
    return pt, word


def killed_norms(pt: RepPoint, upto_r: int) -> float:
    """max norm over the columns of v and rows of w past the active rank."""
    if upto_r >= pt.r:
        return 0.0
    return max(
        float(np.amax(np.abs(pt.v[:, upto_r:]))),
        float(np.amax(np.abs(pt.w[upto_r:, :]))),
    )


def reduce_to_rank1(pt: RepPoint, spec: QuiverSpec) -> NavTrace:
    """Iterate the rank reduction down to the embedded rank-1 locus."""
    trace = NavTrace(pt)
    cur, w0 = ensure_primed(pt, spec)
    trace.word = trace.word + w0
    trace.log("ensure_primed", cur)
    for r in range(pt.r, 1, -1):
        cur, w = reduce_rank_once(cur, spec, active_r=r, trace=trace)
        trace.word = trace.word + w
    trace.final = cur
    return trace


# ---------------------------------------------------------------------------
# connection


def _normalize_rank1(
    pt: RepPoint, spec: QuiverSpec
) -> tuple[RepPoint, GeneratorWord]:
    """Canonical rank-1 form within reach of the loop moves: X regular
    semisimple and the diagonal of Y zeroed in the X eigenbasis."""
    word = GeneratorWord()
    if not is_regular_semisimple(pt.X):
        pt2, w = regularize(pt, spec, "X")
        pt, word = pt2, word + w
    lam, V = _eig_sorted(pt.X)
    ydiag = np.diag(np.linalg.solve(V, pt.Y @ V))
    if float(np.amax(np.abs(ydiag))) > 1e-13 * pt.scale():
        shift = interpolate(lam, -ydiag, "a")
        gen = Triangular(_antiderivative_necklace(shift, triangular_alphabet(spec)))
        w = GeneratorWord.of(gen)
        pt, word = act(pt, w, spec), word + w
    return pt, word


def connect(p: RepPoint, q: RepPoint, spec: QuiverSpec) -> GeneratorWord:
    """Word carrying p onto the gauge orbit of q, when the two rank-1
    reductions meet; raises NotConnectedAtRank1 otherwise.

    The rank-1 endgame available here is the reachable normalization (zero
    the Y diagonal); identifying arbitrary rank-1 orbits is out of scope.
    """
    if (p.n, p.r) != (q.n, q.r):
        raise RankMismatch("points live on different phase spaces")
    if orbit_equal(p, q):
        return GeneratorWord()
    tp = reduce_to_rank1(p, spec)
    tq = reduce_to_rank1(q, spec)
    fp, wp = _normalize_rank1(tp.final, spec)
    fq, wq = _normalize_rank1(tq.final, spec)
    if not orbit_equal(fp, fq):
        raise NotConnectedAtRank1(
            "rank-1 reductions land in distinct orbits; the rank-1 endgame is out of scope"
        )
    word = tp.word + wp + (tq.word + wq).inverse()
    if not orbit_equal(act(p, word, spec), q):
        raise NotConnectedAtRank1("replayed word does not reach the target orbit")
    return word
