"""Necklace calculus: cyclic words, necklace derivatives, Poisson bracket.

Two levels coexist.  The letter level works over a declared free alphabet
(``a`` together with the composite cycles ``b_ij``, or abstract letters for
the commutator-primitive solver); cyclic words are stored in their minimal
rotation and scalars are excluded, matching the quotient by constants.  The
arrow level works directly on closed words of the path algebra; there the
idempotent terms are kept, so the bracket of ``a`` with ``a*`` is ``e1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotClosed, OrientationError, UnknownLetter
from .quiver import (
    NCPoly,
    QuiverSpec,
    arrow_derivative,
    canonicalize_word,
    to_necklace,
)
from .scalars import Gauss, ONE


@dataclass(frozen=True)
class Letter:
    name: str
    expansion: NCPoly | None = None  # cycle at vertex 1 when present


class Alphabet:
    """Ordered free generating set, optionally with path-algebra expansions."""

    def __init__(self, letters: Sequence[Letter]):
        if len({l.name for l in letters}) != len(letters):
            raise ValueError("duplicate letter names")
        self.letters = tuple(letters)
        self.index = {l.name: k for k, l in enumerate(self.letters)}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(l.name for l in self.letters)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def expansion(self, name: str) -> NCPoly:
        l = self.letters[self.index[name]]
        if l.expansion is None:
            raise UnknownLetter(f"letter {name!r} has no arrow expansion")
        return l.expansion

    def key(self, word: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.index[n] for n in word)


def abstract_alphabet(names: Sequence[str]) -> Alphabet:
    return Alphabet([Letter(n) for n in names])


def triangular_alphabet(spec: QuiverSpec) -> Alphabet:
    """Letters ``a`` and ``b{i}{j}`` expanding to u_i * v_j (cycles at 1).

    u runs over the unstarred arrows 2->1 and v over the unstarred arrows
    1->2, signs folded in; for the zigzag orientation this is x_i * y_j.
    """
    letters = [Letter("a", spec.arrow("a"))]
    us = [Gauss(s) * spec.arrow(n) for s, n in spec.unstarred_u()]
    vs = [Gauss(s) * spec.arrow(n) for s, n in spec.unstarred_v()]
    for i, u in enumerate(us, start=1):
        for j, v in enumerate(vs, start=1):
            letters.append(Letter(f"b{i}{j}", u * v))
    return Alphabet(letters)


def op_triangular_alphabet(spec: QuiverSpec) -> Alphabet:
    """Letters ``a*`` and ``b{i}{j}*`` expanding to v_j* * u_i*."""
    letters = [Letter("a*", spec.arrow("a*"))]
    sus = [Gauss(s) * spec.arrow(n) for s, n in spec.starred_of_u()]
    svs = [Gauss(s) * spec.arrow(n) for s, n in spec.starred_of_v()]
    for i, su in enumerate(sus, start=1):
        for j, sv in enumerate(svs, start=1):
            letters.append(Letter(f"b{i}{j}*", sv * su))
    return Alphabet(letters)


class LetterPoly:
    """Noncommutative polynomial over an alphabet (linear words, not cyclic)."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[tuple[str, ...], Gauss]):
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(
            self, "terms", {w: c for w, c in terms.items() if not c.is_zero()}
        )

    def __setattr__(self, *_):
        raise AttributeError("LetterPoly is immutable")

    @staticmethod
    def zero(alphabet: Alphabet) -> "LetterPoly":
        return LetterPoly(alphabet, {})

    @staticmethod
    def word(alphabet: Alphabet, letters: Sequence[str], coeff=ONE) -> "LetterPoly":
        for n in letters:
            if n not in alphabet:
                raise UnknownLetter(f"letter {n!r} not in alphabet")
        c = coeff if type(coeff) is Gauss else Gauss(coeff)
        return LetterPoly(alphabet, {tuple(letters): c})

    def __add__(self, other: "LetterPoly") -> "LetterPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            out[w] = c if s is None else s + c
        return LetterPoly(self.alphabet, out)

    def __sub__(self, other: "LetterPoly") -> "LetterPoly":
        return self + (-other)

    def __neg__(self) -> "LetterPoly":
        return LetterPoly(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other) -> "LetterPoly":
        if isinstance(other, LetterPoly):
            out: dict[tuple[str, ...], Gauss] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    c = c1 * c2
                    s = out.get(w)
                    out[w] = c if s is None else s + c
            return LetterPoly(self.alphabet, out)
        c = other if type(other) is Gauss else Gauss(other)
        return LetterPoly(self.alphabet, {w: k * c for w, k in self.terms.items()})

    def __rmul__(self, other) -> "LetterPoly":
        return self * other

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LetterPoly)
            and self.alphabet.names == other.alphabet.names
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def commutator(self, other: "LetterPoly") -> "LetterPoly":
        return self * other - other * self

    def expand(self, spec: QuiverSpec) -> NCPoly:
        """Substitute the letter expansions, producing a value in A1."""
        out = spec.zero()
        for w, c in self.terms.items():
            acc = spec.idem(1)
            for name in w:
                acc = acc * self.alphabet.expansion(name)
            out = out + acc * c
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: (len(it[0]), self.alphabet.key(it[0])))


def cyc_canonical(alphabet: Alphabet, word: Sequence[str]) -> tuple[str, ...]:
    """Lexicographically minimal rotation under the alphabet order."""
    word = tuple(word)
    if not word:
        raise NotClosed("scalar terms are excluded from cyclic sums")
    best, best_key = None, None
    for k in range(len(word)):
        rot = word[k:] + word[:k]
        key = alphabet.key(rot)
        if best_key is None or key < best_key:
            best_key, best = key, rot
    return best


class CycSum:
    """Finite linear combination of necklace words over an alphabet.

    Scalar (length-0) terms are forbidden; words are stored canonically.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[tuple[str, ...], Gauss]):
        canon: dict[tuple[str, ...], Gauss] = {}
        for w, c in terms.items():
            cw = cyc_canonical(alphabet, w)
            s = canon.get(cw)
            s = c if s is None else s + c
            canon[cw] = s
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(
            self, "terms", {w: c for w, c in canon.items() if not c.is_zero()}
        )

    def __setattr__(self, *_):
        raise AttributeError("CycSum is immutable")

    @staticmethod
    def zero(alphabet: Alphabet) -> "CycSum":
        return CycSum(alphabet, {})

    @staticmethod
    def word(alphabet: Alphabet, letters: Sequence[str], coeff=ONE) -> "CycSum":
        for n in letters:
            if n not in alphabet:
                raise UnknownLetter(f"letter {n!r} not in alphabet")
        c = coeff if type(coeff) is Gauss else Gauss(coeff)
        return CycSum(alphabet, {tuple(letters): c})

    def __add__(self, other: "CycSum") -> "CycSum":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            out[w] = c if s is None else s + c
        return CycSum(self.alphabet, out)

    def __sub__(self, other: "CycSum") -> "CycSum":
        return self + (-other)

    def __neg__(self) -> "CycSum":
        return CycSum(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __rmul__(self, other) -> "CycSum":
        c = other if type(other) is Gauss else Gauss(other)
        return CycSum(self.alphabet, {w: c * k for w, k in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CycSum)
            and self.alphabet.names == other.alphabet.names
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def rename(self, alphabet: Alphabet, mapping: Mapping[str, str]) -> "CycSum":
        """Transport to another alphabet letter-by-letter."""
        return CycSum(
            alphabet,
            {tuple(mapping[n] for n in w): c for w, c in self.terms.items()},
        )

    def restrict_to(self, names: Iterable[str]) -> "CycSum":
        keep = set(names)
        return CycSum(
            self.alphabet,
            {w: c for w, c in self.terms.items() if set(w) <= keep},
        )

    def expand(self, spec: QuiverSpec) -> NCPoly:
        """Expand letters to arrows and canonicalize as arrow necklaces."""
        out = spec.zero()
        for w, c in self.terms.items():
            acc = spec.idem(1)
            for name in w:
                acc = acc * self.alphabet.expansion(name)
            out = out + acc * c
        return to_necklace(out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: (len(it[0]), self.alphabet.key(it[0])))


def necklace_derivative(f: CycSum, g: str) -> LetterPoly:
    """Sum over occurrences of ``g`` of the word read cyclically just after it."""
    if g not in f.alphabet:
        raise UnknownLetter(f"letter {g!r} not in alphabet")
    out = LetterPoly.zero(f.alphabet)
    for w, c in f.terms.items():
        for k, nm in enumerate(w):
            if nm != g:
                continue
            rest = w[k + 1 :] + w[:k]
            out = out + LetterPoly(f.alphabet, {rest: c})
    return out


def poisson_bracket(w1: NCPoly, w2: NCPoly, spec: QuiverSpec | None = None) -> NCPoly:
    """Quiver Poisson bracket of two (sums of) necklace words.

    Derivatives are taken along the spec's unstarred arrows and their star
    partners, alias signs included; the result is reduced to necklace form.
    """
    if spec is None:
        spec = w1.spec
    out = spec.zero()
    pairs = [((1, "a"), (1, "a*"))] + [(p.unstarred, p.starred) for p in spec.pairs]
    for (su, gu), (ss, gs) in pairs:
        sign = Gauss(su * ss)
        d1u = arrow_derivative(w1, gu)
        d1s = arrow_derivative(w1, gs)
        d2u = arrow_derivative(w2, gu)
        d2s = arrow_derivative(w2, gs)
        out = out + sign * (d1u * d2s - d1s * d2u)
    return to_necklace(out)


def moment_element(spec: QuiverSpec) -> tuple[NCPoly, NCPoly, NCPoly]:
    """The moment element c = sum of [xi, xi*] over unstarred arrows, split
    into its vertex-1 and vertex-2 cycles."""
    a, astar = spec.arrow("a"), spec.arrow("a*")
    c = a.commutator(astar)
    for p in spec.pairs:
        u = Gauss(p.unstarred[0]) * spec.arrow(p.unstarred[1])
        s = Gauss(p.starred[0]) * spec.arrow(p.starred[1])
        c = c + u.commutator(s)
    return c, c.project_block(1, 1), c.project_block(2, 2)
