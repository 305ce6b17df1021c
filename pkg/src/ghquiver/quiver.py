"""Path-algebra kernel for the doubled two-vertex quivers.

The quiver has vertices 1 and 2, loops ``a``, ``a*`` at vertex 1, arrows
``d1..dr`` from 2 to 1 and ``b1..br`` from 1 to 2.  Words multiply in
function-composition order: in ``d1 b1`` the arrow ``b1`` is traversed first,
so the product is a cycle at vertex 1.  The star pairing on raw arrows is
always ``a <-> a*`` and ``d_alpha <-> b_alpha``; the orientation tag decides
which member of each pair is the unstarred arrow of the underlying quiver and
with which sign, via the alias table:

* ``zigzag``  -- x_i = -d(2i-1), x_i* = b(2i-1), y_j = b(2j), y_j* = d(2j);
* ``single_x`` -- x = d1, x* = b1, y_k = b(k+1), y_k* = d(k+1);
* ``all_d``   -- d_alpha unstarred, d_alpha* = b_alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import BlockViolation, InvalidRank, NotClosed, OrientationError, SpecMismatch
from .scalars import Gauss, ONE

ORIENTATIONS = ("zigzag", "single_x", "all_d")


@dataclass(frozen=True)
class ArrowPair:
    """One star pair of cross arrows, with the orientation's signed aliases.

    ``unstarred``/``starred`` are (sign, arrow_name) pairs: the algebra
    element is sign * arrow.
    """

    unstarred: tuple[int, str]
    starred: tuple[int, str]


class QuiverSpec:
    """Immutable description of one doubled quiver (rank, arrows, orientation)."""

    def __init__(self, r: int, orientation: str = "zigzag"):
        if r < 1:
            raise InvalidRank(f"rank must be >= 1, got {r}")
        if orientation not in ORIENTATIONS:
            raise OrientationError(f"unknown orientation {orientation!r}")
        self.r = r
        self.orientation = orientation

        names = ["a", "a*"]
        names += [f"d{i}" for i in range(1, r + 1)]
        names += [f"b{i}" for i in range(1, r + 1)]
        self.arrow_names: tuple[str, ...] = tuple(names)
        self.order: dict[str, int] = {n: k for k, n in enumerate(names)}

        ends: dict[str, tuple[int, int]] = {"a": (1, 1), "a*": (1, 1)}
        for i in range(1, r + 1):
            ends[f"d{i}"] = (2, 1)  # (source, target)
            ends[f"b{i}"] = (1, 2)
        self._ends = ends

        star = {"a": "a*", "a*": "a"}
        for i in range(1, r + 1):
            star[f"d{i}"] = f"b{i}"
            star[f"b{i}"] = f"d{i}"
        self.star: dict[str, str] = star

        self.pairs: tuple[ArrowPair, ...] = self._build_pairs()
        self.aliases: dict[str, tuple[int, str]] = self._build_aliases()
        # number of unstarred arrows 2->1 (u-side) and 1->2 (v-side)
        self.n_x = sum(1 for p in self.pairs if ends[p.unstarred[1]][0] == 2)
        self.n_y = len(self.pairs) - self.n_x
        self.q = self.n_x * self.n_y

    def _build_pairs(self) -> tuple[ArrowPair, ...]:
        r = self.r
        pairs = []
        if self.orientation == "zigzag":
            for alpha in range(1, r + 1):
                d, b = f"d{alpha}", f"b{alpha}"
                if alpha % 2 == 1:  # x_i = -d, x_i* = b
                    pairs.append(ArrowPair((-1, d), (1, b)))
                else:  # y_j = b, y_j* = d
                    pairs.append(ArrowPair((1, b), (1, d)))
        elif self.orientation == "single_x":
            pairs.append(ArrowPair((1, "d1"), (1, "b1")))
            for k in range(2, r + 1):
                pairs.append(ArrowPair((1, f"b{k}"), (1, f"d{k}")))
        else:  # all_d
            for alpha in range(1, r + 1):
                pairs.append(ArrowPair((1, f"d{alpha}"), (1, f"b{alpha}")))
        return tuple(pairs)

    def _build_aliases(self) -> dict[str, tuple[int, str]]:
        r = self.r
        al: dict[str, tuple[int, str]] = {}
        if self.orientation == "zigzag":
            for alpha in range(1, r + 1):
                if alpha % 2 == 1:
                    i = (alpha + 1) // 2
                    al[f"x{i}"] = (-1, f"d{alpha}")
                    al[f"x{i}*"] = (1, f"b{alpha}")
                else:
                    j = alpha // 2
                    al[f"y{j}"] = (1, f"b{alpha}")
                    al[f"y{j}*"] = (1, f"d{alpha}")
        elif self.orientation == "single_x":
            al["x"] = (1, "d1")
            al["x*"] = (1, "b1")
            for k in range(1, r):
                al[f"y{k}"] = (1, f"b{k + 1}")
                al[f"y{k}*"] = (1, f"d{k + 1}")
        return al

    # u-side: unstarred arrows 2->1 as signed elements, in index order
    def unstarred_u(self) -> list[tuple[int, str]]:
        return [p.unstarred for p in self.pairs if self._ends[p.unstarred[1]][0] == 2]

    # v-side: unstarred arrows 1->2
    def unstarred_v(self) -> list[tuple[int, str]]:
        return [p.unstarred for p in self.pairs if self._ends[p.unstarred[1]][0] == 1]

    def starred_of_u(self) -> list[tuple[int, str]]:
        return [p.starred for p in self.pairs if self._ends[p.unstarred[1]][0] == 2]

    def starred_of_v(self) -> list[tuple[int, str]]:
        return [p.starred for p in self.pairs if self._ends[p.unstarred[1]][0] == 1]

    # -- basic queries ------------------------------------------------------

    def endpoints(self, name: str) -> tuple[int, int]:
        try:
            return self._ends[name]
        except KeyError:
            raise SpecMismatch(f"unknown arrow {name!r} for rank {self.r}") from None

    def source(self, name: str) -> int:
        return self.endpoints(name)[0]

    def target(self, name: str) -> int:
        return self.endpoints(name)[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuiverSpec)
            and self.r == other.r
            and self.orientation == other.orientation
        )

    def __hash__(self):
        return hash((self.r, self.orientation))

    def __repr__(self):
        return f"QuiverSpec(r={self.r}, orientation={self.orientation!r})"

    # -- element constructors -------------------------------------------------

    def word(self, arrows: Iterable[str]) -> "PathWord":
        arrows = tuple(arrows)
        if not arrows:
            raise ValueError("empty word needs a vertex; use idem()")
        for name in arrows:
            self.endpoints(name)
        for left, right in zip(arrows, arrows[1:]):
            if self.source(left) != self.target(right):
                raise BlockViolation(f"arrows {left!r}{right!r} do not compose")
        return PathWord(arrows, self.source(arrows[-1]), self.target(arrows[0]))

    def idem(self, vertex: int) -> "NCPoly":
        return NCPoly(self, {PathWord((), vertex, vertex): ONE})

    def one(self) -> "NCPoly":
        return self.idem(1) + self.idem(2)

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def arrow(self, name: str) -> "NCPoly":
        s, t = self.endpoints(name)
        return NCPoly(self, {PathWord((name,), s, t): ONE})

    def element(self, name: str) -> "NCPoly":
        """Arrow, idempotent or alias by name, alias signs included."""
        if name == "e1":
            return self.idem(1)
        if name == "e2":
            return self.idem(2)
        if name in self._ends:
            return self.arrow(name)
        if name in self.aliases:
            sign, raw = self.aliases[name]
            return Gauss(sign) * self.arrow(raw)
        raise SpecMismatch(f"unknown arrow {name!r} for rank {self.r}")

    def monomial(self, arrows: Iterable[str], coeff=ONE) -> "NCPoly":
        return NCPoly(self, {self.word(arrows): _as_gauss(coeff)})


def build_quiver(r: int, orientation: str = "zigzag") -> QuiverSpec:
    return QuiverSpec(r, orientation)


@dataclass(frozen=True)
class PathWord:
    """A composable word of arrows; length 0 words are the idempotents."""

    arrows: tuple[str, ...]
    source: int
    target: int

    def __len__(self):
        return len(self.arrows)

    @property
    def block(self) -> tuple[int, int]:
        return (self.target, self.source)

    def is_closed(self) -> bool:
        return self.source == self.target


def _as_gauss(c) -> Gauss:
    if type(c) is Gauss:
        return c
    if isinstance(c, (int, Fraction)):
        return Gauss(c)
    if isinstance(c, (float, complex)):
        return Gauss.from_complex(complex(c))
    raise TypeError(f"cannot use {c!r} as a coefficient")


class NCPoly:
    """Exact finite linear combination of composable words.

    Terms live in a dict PathWord -> Gauss with no zero coefficients stored.
    Instances are immutable; all operations return fresh values.
    """

    __slots__ = ("spec", "terms")

    def __init__(self, spec: QuiverSpec, terms: Mapping[PathWord, Gauss]):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(
            self, "terms", {w: c for w, c in terms.items() if not c.is_zero()}
        )

    def __setattr__(self, name, value):
        raise AttributeError("NCPoly is immutable")

    # -- ring structure -----------------------------------------------------

    def _check(self, other: "NCPoly"):
        if self.spec != other.spec:
            raise SpecMismatch("operands built over different quivers")

    def __add__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            out[w] = c if s is None else s + c
        return NCPoly(self.spec, out)

    def __sub__(self, other) -> "NCPoly":
        return self + (-other)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.spec, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            c = _as_gauss(other)
            return NCPoly(self.spec, {w: k * c for w, k in self.terms.items()})
        self._check(other)
        out: dict[PathWord, Gauss] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if w1.source != w2.target:
                    continue  # non-composable concatenation contributes 0
                w = PathWord(w1.arrows + w2.arrows, w2.source, w1.target)
                c = c1 * c2
                s = out.get(w)
                out[w] = c if s is None else s + c
        return NCPoly(self.spec, out)

    def __rmul__(self, other) -> "NCPoly":
        c = _as_gauss(other)
        return NCPoly(self.spec, {w: c * k for w, k in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, word: PathWord) -> Gauss:
        return self.terms.get(word, Gauss(0))

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def commutator(self, other: "NCPoly") -> "NCPoly":
        return self * other - other * self

    # -- block structure ------------------------------------------------------

    def project_block(self, i: int, j: int) -> "NCPoly":
        """Sum of the terms lying in e_i * CQ * e_j (paths j -> i)."""
        return NCPoly(
            self.spec,
            {w: c for w, c in self.terms.items() if w.target == i and w.source == j},
        )

    def block_of(self) -> tuple[int, int] | None:
        """The unique (i, j) block, None for 0, error if mixed."""
        blocks = {w.block for w in self.terms}
        if not blocks:
            return None
        if len(blocks) > 1:
            raise BlockViolation(f"value spans several blocks: {sorted(blocks)}")
        return blocks.pop()

    def sort_key(self, word: PathWord):
        return (len(word), tuple(self.spec.order[n] for n in word.arrows), word.source)

    def sorted_terms(self) -> list[tuple[PathWord, Gauss]]:
        return sorted(self.terms.items(), key=lambda it: self.sort_key(it[0]))


def nc_substitute(p: NCPoly, images: Mapping[str, NCPoly]) -> NCPoly:
    """Extend an arrow assignment to a C^2-linear ring morphism.

    Arrows missing from ``images`` are kept fixed; the idempotents are always
    fixed.  Every image must lie in the block of its arrow.
    """
    spec = p.spec
    cache: dict[str, NCPoly] = {}
    for name, img in images.items():
        s, t = spec.endpoints(name)
        if img.spec != spec:
            raise SpecMismatch("image built over a different quiver")
        blk = img.block_of()
        if blk is not None and blk != (t, s):
            raise BlockViolation(f"image of {name!r} leaves block {(t, s)}")
        cache[name] = img

    out = spec.zero()
    for w, c in p.terms.items():
        acc = spec.idem(w.target)
        for name in w.arrows:
            acc = acc * cache.get(name, spec.arrow(name))
        out = out + acc * c
    return out


def decompose_left(p: NCPoly) -> list[NCPoly]:
    """Write p in A12 as sum_beta rho_beta * d_beta with rho_beta in A1.

    The first-traversed (rightmost) arrow of every word in A12 is some d.
    """
    spec = p.spec
    rho = [dict() for _ in range(spec.r)]
    for w, c in p.terms.items():
        if w.block != (1, 2):
            raise BlockViolation("decompose_left needs a value inside A12")
        last = w.arrows[-1]
        beta = int(last[1:]) - 1  # rightmost arrow starts at 2, hence some d
        head = PathWord(w.arrows[:-1], 1, 1)
        rho[beta][head] = c
    return [NCPoly(spec, t) for t in rho]


def decompose_right(p: NCPoly) -> list[NCPoly]:
    """Write p in A21 as sum_beta b_beta * rho_beta with rho_beta in A1."""
    spec = p.spec
    rho = [dict() for _ in range(spec.r)]
    for w, c in p.terms.items():
        if w.block != (2, 1):
            raise BlockViolation("decompose_right needs a value inside A21")
        first = w.arrows[0]
        beta = int(first[1:]) - 1
        tail = PathWord(w.arrows[1:], 1, 1)
        rho[beta][tail] = c
    return [NCPoly(spec, t) for t in rho]


def canonicalize_word(spec: QuiverSpec, w: PathWord) -> PathWord:
    """Minimal rotation of a closed word under the fixed arrow order."""
    if not w.is_closed():
        raise NotClosed(f"word from {w.source} to {w.target} is not a cycle")
    if len(w) <= 1:
        return w
    arrows = w.arrows
    best = None
    best_key = None
    for k in range(len(arrows)):
        rot = arrows[k:] + arrows[:k]
        key = tuple(spec.order[n] for n in rot)
        if best_key is None or key < best_key:
            best_key, best = key, rot
    v = spec.source(best[-1])
    return PathWord(best, v, v)


def to_necklace(p: NCPoly) -> NCPoly:
    """Canonicalize every (closed) term; raises NotClosed on open words."""
    out: dict[PathWord, Gauss] = {}
    for w, c in p.terms.items():
        cw = canonicalize_word(p.spec, w)
        s = out.get(cw)
        out[cw] = c if s is None else s + c
    return NCPoly(p.spec, out)


def arrow_derivative(p: NCPoly, name: str) -> NCPoly:
    """Necklace derivative of a sum of cycles with respect to one arrow.

    For each occurrence of the arrow in each cycle, emit the word read
    cyclically from just after that occurrence.
    """
    spec = p.spec
    spec.endpoints(name)
    s, t = spec.endpoints(name)
    out = spec.zero()
    for w, c in p.terms.items():
        if not w.is_closed():
            raise NotClosed("necklace derivative needs closed words")
        arrows = w.arrows
        for k, nm in enumerate(arrows):
            if nm != name:
                continue
            rest = arrows[k + 1 :] + arrows[:k]
            out = out + NCPoly(spec, {PathWord(rest, t, s): c})
    return out


def drop_ideal(p: NCPoly) -> NCPoly:
    """Reduce modulo the two-sided ideal generated by e2 and all d, b arrows.

    Keeps only the words made purely of loops at vertex 1.
    """
    keep: dict[PathWord, Gauss] = {}
    for w, c in p.terms.items():
        if w.block != (1, 1):
            continue
        if all(n in ("a", "a*") for n in w.arrows):
            keep[w] = c
    return NCPoly(p.spec, keep)
