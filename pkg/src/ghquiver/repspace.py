"""Numerical layer: points of the moment-map fiber, evaluation of
noncommutative polynomials, the right action of endomorphisms, gauge moves,
orbit equality on the regular locus, Hamiltonians and flows.

A point is a quadruple (X, Y, v, w) with [X, Y] - v w = tau I.  Arrows
evaluate as a -> X, a* -> Y, d_alpha -> column alpha of v, b_alpha -> row
alpha of w; a word evaluates to the matrix product in word order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .autom import Endo, GeneratorWord
from .errors import (
    BadFiberPoint,
    BlockViolation,
    FreeActionLost,
    NonPolynomialFlow,
    NotComparable,
    NotInvertible,
    NotRegularSemisimple,
    NumericalDrift,
    RankMismatch,
    SpecMismatch,
)
from .quiver import NCPoly, QuiverSpec


@dataclass(frozen=True)
class RepPoint:
    """A numerical point of the fiber [X,Y] - vw = tau I."""

    n: int
    r: int
    tau: complex
    X: np.ndarray
    Y: np.ndarray
    v: np.ndarray
    w: np.ndarray
    tol: float = 1e-9

    def __post_init__(self):
        X = np.asarray(self.X, dtype=complex)
        Y = np.asarray(self.Y, dtype=complex)
        v = np.asarray(self.v, dtype=complex).reshape(self.n, self.r)
        w = np.asarray(self.w, dtype=complex).reshape(self.r, self.n)
        for name, m, shape in (("X", X, (self.n, self.n)), ("Y", Y, (self.n, self.n))):
            if m.shape != shape:
                raise BadFiberPoint(f"{name} has shape {m.shape}, expected {shape}")
        if not all(np.isfinite(m).all() for m in (X, Y, v, w)):
            raise BadFiberPoint("non-finite entries")
        for name, m in (("X", X), ("Y", Y), ("v", v), ("w", w)):
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        res = moment_residual(self)
        if res > self.tol * self.scale():
            raise BadFiberPoint(
                f"moment residual {res:.3e} exceeds {self.tol:.1e} * scale"
            )

    def scale(self) -> float:
        return 1.0 + _norm(self.X) * _norm(self.Y) + _norm(self.v) * _norm(self.w)

    def with_matrices(self, X=None, Y=None, v=None, w=None) -> "RepPoint":
        return RepPoint(
            self.n,
            self.r,
            self.tau,
            self.X if X is None else X,
            self.Y if Y is None else Y,
            self.v if v is None else v,
            self.w if w is None else w,
            self.tol,
        )


def _norm(m) -> float:
    return float(np.linalg.norm(m))


def moment_residual(pt: RepPoint) -> float:
    """Frobenius norm of [X, Y] - v w - tau I."""
    m = pt.X @ pt.Y - pt.Y @ pt.X - pt.v @ pt.w - pt.tau * np.eye(pt.n)
    return _norm(m)


def random_fiber_point(
    n: int,
    r: int,
    tau: complex = 1.0,
    seed: int = 0,
    kind: str = "Cprime",
    tol: float = 1e-9,
) -> RepPoint:
    """Seeded point of the fiber in the canonical regular form.

    ``Cprime`` builds X diagonal with distinct eigenvalues, samples the
    internal pairs on the v_i. w_.i = -tau slice and assembles Y from the
    off-diagonal ratios; ``Cdoubleprime`` pushes that point through the loop
    Fourier generator, making Y the regular semisimple matrix.
    """
    if tau == 0:
        raise FreeActionLost("tau must be nonzero")
    if kind not in ("Cprime", "Cdoubleprime"):
        raise ValueError(f"unknown kind {kind!r}")
    rng = np.random.default_rng(seed)

    def cnormal(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    for _ in range(64):
        x = cnormal(n)
        if n == 1 or np.amin(np.abs(x[:, None] - x[None, :])[~np.eye(n, dtype=bool)]) > 0.1:
            break
    else:
        raise BadFiberPoint("could not sample distinct eigenvalues")
    y = cnormal(n)
    v = cnormal(n, r)
    w = cnormal(r, n)
    for i in range(n):
        for _ in range(64):
            s = v[i, :] @ w[:, i]
            if abs(s) > 1e-3:
                break
            w[:, i] = cnormal(r)
        w[:, i] *= -tau / (v[i, :] @ w[:, i])
    Y = np.diag(y.astype(complex))
    for i in range(n):
        for j in range(n):
            if i != j:
                Y[i, j] = (v[i, :] @ w[:, j]) / (x[i] - x[j])
    pt = RepPoint(n, r, tau, np.diag(x), Y, v, w, tol)
    if kind == "Cdoubleprime":
        from .autom import FourierZero

        pt = act_generator(pt, FourierZero(), _spec_for(pt))
    return pt


def _spec_for(pt: RepPoint, spec: QuiverSpec | None = None) -> QuiverSpec:
    from .quiver import build_quiver

    if spec is None:
        return build_quiver(pt.r)
    if spec.r != pt.r:
        raise RankMismatch(f"point rank {pt.r} vs quiver rank {spec.r}")
    return spec


def arrow_matrix(pt: RepPoint, name: str) -> np.ndarray:
    if name == "a":
        return pt.X
    if name == "a*":
        return pt.Y
    if name == "e1":
        return np.eye(pt.n, dtype=complex)
    if name == "e2":
        return np.eye(1, dtype=complex)
    kind, idx = name[0], int(name[1:])
    if kind == "d" and 1 <= idx <= pt.r:
        return pt.v[:, idx - 1 : idx]
    if kind == "b" and 1 <= idx <= pt.r:
        return pt.w[idx - 1 : idx, :]
    raise SpecMismatch(f"unknown arrow {name!r}")


_BLOCK_SHAPE = {(1, 1): "nn", (1, 2): "n1", (2, 1): "1n", (2, 2): "11"}


def eval_poly(p: NCPoly, pt: RepPoint) -> np.ndarray:
    """Evaluate a block-homogeneous polynomial at the point."""
    blk = p.block_of()
    if blk is None:
        blk = (1, 1)
    if blk not in _BLOCK_SHAPE:
        raise BlockViolation(f"unknown block {blk}")
    rows = pt.n if blk[0] == 1 else 1
    cols = pt.n if blk[1] == 1 else 1
    out = np.zeros((rows, cols), dtype=complex)
    for word, c in p.terms.items():
        if len(word) == 0:
            m = np.eye(rows, dtype=complex)
        else:
            m = arrow_matrix(pt, word.arrows[0])
            for name in word.arrows[1:]:
                m = m @ arrow_matrix(pt, name)
        out = out + c.to_complex() * m
    return out


def act_endo(pt: RepPoint, psi: Endo, drift_guard: float = 1e3) -> RepPoint:
    """Right action: replace every arrow matrix by the evaluation of its image."""
    spec = _spec_for(pt, psi.spec)
    X = eval_poly(psi.images["a"], pt)
    Y = eval_poly(psi.images["a*"], pt)
    v = np.hstack([eval_poly(psi.images[f"d{k}"], pt) for k in range(1, pt.r + 1)])
    w = np.vstack([eval_poly(psi.images[f"b{k}"], pt) for k in range(1, pt.r + 1)])
    try:
        return RepPoint(pt.n, pt.r, pt.tau, X, Y, v, w, pt.tol)
    except BadFiberPoint as e:
        raise NumericalDrift(str(e)) from None


def act_generator(pt: RepPoint, g, spec: QuiverSpec) -> RepPoint:
    return act_endo(pt, g.expand(spec))


def act(pt: RepPoint, psi, spec: QuiverSpec | None = None) -> RepPoint:
    """Act by an Endo, a Generator or a GeneratorWord (generator by generator)."""
    if isinstance(psi, Endo):
        return act_endo(pt, psi)
    spec = _spec_for(pt, spec)
    if isinstance(psi, GeneratorWord):
        out = pt
        for g in psi.gens:
            out = act_generator(out, g, spec)
        return out
    return act_generator(pt, psi, spec)


def gauge(pt: RepPoint, g: np.ndarray) -> RepPoint:
    """(X,Y,v,w) -> (gXg^-1, gYg^-1, gv, wg^-1)."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (pt.n, pt.n):
        raise NotInvertible(f"gauge matrix has shape {g.shape}")
    try:
        ginv = np.linalg.inv(g)
    except np.linalg.LinAlgError:
        raise NotInvertible("singular gauge matrix") from None
    return pt.with_matrices(
        X=g @ pt.X @ ginv, Y=g @ pt.Y @ ginv, v=g @ pt.v, w=pt.w @ ginv
    )


def _eig_gap(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    lam, V = np.linalg.eig(m)
    n = len(lam)
    if n == 1:
        return lam, V, np.inf
    gap = np.amin(np.abs(lam[:, None] - lam[None, :])[~np.eye(n, dtype=bool)])
    return lam, V, float(gap)


def is_regular_semisimple(m: np.ndarray, gap_tol: float | None = None) -> bool:
    lam, _, gap = _eig_gap(np.asarray(m, dtype=complex))
    if gap_tol is None:
        gap_tol = 1e-6 * (1.0 + float(np.amax(np.abs(lam))))
    return gap > gap_tol


def _sorted_eig(m: np.ndarray, gap_tol: float | None = None):
    """Eigen-decomposition sorted by (Re, Im); rejects near-degenerate spectra."""
    lam, V, gap = _eig_gap(np.asarray(m, dtype=complex))
    if gap_tol is None:
        gap_tol = 1e-6 * (1.0 + float(np.amax(np.abs(lam))))
    if gap <= gap_tol:
        raise NotRegularSemisimple(f"eigenvalue gap {gap:.3e} below {gap_tol:.3e}")
    order = np.lexsort((lam.imag, lam.real))
    return lam[order], V[:, order], np.asarray(order)


def diagonalize_X(pt: RepPoint) -> tuple[RepPoint, np.ndarray]:
    """Gauge to the representative with X diagonal, eigenvalues sorted."""
    lam, V, order = _sorted_eig(pt.X)
    out = gauge(pt, np.linalg.inv(V))
    X = np.diag(lam)
    return out.with_matrices(X=X), order


def orbit_equal(p: RepPoint, q: RepPoint, tol: float | None = None) -> bool:
    """Equality in the gauge quotient, decided on the regular locus.

    On the X-regular locus the complete invariants are the sorted spectrum of
    X, the diagonal of Y in the diagonalizing gauge, and the slice products
    v_{i alpha} w_{beta i}; when only Y is regular both points are pushed
    through the loop Fourier generator first.
    """
    if (p.n, p.r) != (q.n, q.r) or abs(p.tau - q.tau) > 1e-12 * (1 + abs(p.tau)):
        return False
    if tol is None:
        tol = max(p.tol, q.tol)
    p_rs, q_rs = is_regular_semisimple(p.X), is_regular_semisimple(q.X)
    if p_rs != q_rs:
        return False
    if not p_rs:
        from .autom import FourierZero

        spec = _spec_for(p)
        py, qy = is_regular_semisimple(p.Y), is_regular_semisimple(q.Y)
        if py != qy:
            return False
        if not py:
            raise NotComparable("neither X nor Y regular semisimple")
        return orbit_equal(
            act_generator(p, FourierZero(), spec),
            act_generator(q, FourierZero(), spec),
            tol,
        )
    dp, _ = diagonalize_X(p)
    dq, _ = diagonalize_X(q)
    scale = max(dp.scale(), dq.scale())
    if np.amax(np.abs(np.diag(dp.X) - np.diag(dq.X))) > tol * scale:
        return False
    if np.amax(np.abs(np.diag(dp.Y) - np.diag(dq.Y))) > tol * scale:
        return False
    prod_p = np.einsum("ia,bi->iab", dp.v, dp.w)
    prod_q = np.einsum("ia,bi->iab", dq.v, dq.w)
    return bool(np.amax(np.abs(prod_p - prod_q)) <= tol * scale)


def hamiltonian(k: int, m: np.ndarray, pt: RepPoint) -> complex:
    """J_{k,m} = tr(Y^k v m w)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    Yk = np.linalg.matrix_power(pt.Y, k)
    return complex(np.trace(Yk @ pt.v @ np.asarray(m, dtype=complex) @ pt.w))


def flow_elementary(k: int, alpha: int, beta: int, t: complex, pt: RepPoint) -> RepPoint:
    """Exact flow of tr(Y^k v e_{alpha beta} w) for alpha != beta (1-based).

    X gains t * sum_{i=1..k} Y^{k-i} v_a w_b Y^{i-1}; column beta of v and row
    alpha of w move linearly; Y is constant.
    """
    if alpha == beta:
        raise NonPolynomialFlow("diagonal internal flows are not polynomial")
    if not (1 <= alpha <= pt.r and 1 <= beta <= pt.r):
        raise RankMismatch("flow indices out of range")
    Y = pt.Y
    va = pt.v[:, alpha - 1 : alpha]
    wb = pt.w[beta - 1 : beta, :]
    Yk = np.linalg.matrix_power(Y, k)
    dX = np.zeros_like(pt.X)
    left = np.linalg.matrix_power(Y, 0)
    for i in range(1, k + 1):
        dX = dX + np.linalg.matrix_power(Y, k - i) @ va @ wb @ np.linalg.matrix_power(Y, i - 1)
    v = pt.v.copy()
    w = pt.w.copy()
    v[:, beta - 1 : beta] = v[:, beta - 1 : beta] - t * (Yk @ va)
    w[alpha - 1 : alpha, :] = w[alpha - 1 : alpha, :] + t * (wb @ Yk)
    return pt.with_matrices(X=pt.X + t * dX, v=v, w=w)


def flow_ode(
    k: int, m: np.ndarray, t: complex, pt: RepPoint, steps: int = 10_000
) -> RepPoint:
    """Fixed-step RK4 integration of the equations of motion of J_{k,m}.

    Test oracle, not a production integrator.  The right-hand side is
    Xdot = sum_{i=1..k} Y^{k-i} v m w Y^{i-1}, Ydot = 0, vdot = -Y^k v m,
    wdot = +m w Y^k: the unique sign choice compatible with that Xdot that
    conserves [X,Y] - vw (and the one the elementary flow formulas
    integrate), since vdot w + v wdot must equal [vmw, Y^k] = [Xdot, Y].
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    m = np.asarray(m, dtype=complex)
    Y = pt.Y
    Yk = np.linalg.matrix_power(Y, k)
    powers = [np.linalg.matrix_power(Y, i) for i in range(max(k, 1))]

    def rhs(state):
        v, w, X = state
        vm = v @ m
        mw = m @ w
        dX = np.zeros_like(X)
        for i in range(1, k + 1):
            dX = dX + powers[k - i] @ vm @ w @ powers[i - 1]
        return (-(Yk @ vm), mw @ Yk, dX)

    h = t / steps
    v, w, X = pt.v.copy(), pt.w.copy(), pt.X.copy()
    for _ in range(steps):
        s0 = (v, w, X)
        k1 = rhs(s0)
        k2 = rhs(tuple(s + 0.5 * h * d for s, d in zip(s0, k1)))
        k3 = rhs(tuple(s + 0.5 * h * d for s, d in zip(s0, k2)))
        k4 = rhs(tuple(s + h * d for s, d in zip(s0, k3)))
        v, w, X = tuple(
            s + (h / 6.0) * (a + 2 * b + 2 * c + d)
            for s, a, b, c, d in zip(s0, k1, k2, k3, k4)
        )
    return pt.with_matrices(X=X, v=v, w=w)
