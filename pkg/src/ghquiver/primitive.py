"""Solver for the commutator equation sum_k [g_k, u_k] = 0.

Given generators G and candidate translations u, the solution set is exactly
the tuples of necklace derivatives of a single cyclic word f; the solver
recovers f orbit by orbit.  The support pairs (i, w) are closed under the
cyclic step (i, m g_j) -> (j, g_i m); each orbit contributes the necklace
g_k w of its minimal representative, scaled so that one derivative
coefficient matches, and the result is verified against every u_k before it
is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotACocycle, NotClosed, NotSolvable, UnknownLetter
from .necklace import Alphabet, CycSum, LetterPoly, abstract_alphabet, necklace_derivative
from .scalars import Gauss

Pair = tuple[int, tuple[str, ...]]


@dataclass(frozen=True)
class Orbit:
    pairs: tuple[Pair, ...]

    @property
    def representative(self) -> Pair:
        return min(self.pairs)


def _pair_set(u: Sequence[LetterPoly]) -> set[Pair]:
    return {(i, w) for i, ui in enumerate(u) for w in ui.terms}


def _step(names: Sequence[str], pair: Pair) -> Pair | None:
    """(i, m g_j) -> (j, g_i m); None for the empty word (fixed point)."""
    i, w = pair
    if not w:
        return None
    last = w[-1]
    try:
        j = list(names).index(last)
    except ValueError:
        return None
    return (j, (names[i],) + w[:-1])


def validate(G: Sequence[str], u: Sequence[LetterPoly]) -> tuple[bool, Pair | None]:
    """Check support words are words over G and the pair set is closed under
    the cyclic step; returns (ok, witness)."""
    names = list(G)
    gset = set(names)
    pairs = _pair_set(u)
    for i, w in pairs:
        if any(n not in gset for n in w):
            return False, (i, w)
    for pair in pairs:
        nxt = _step(names, pair)
        if nxt is not None and nxt not in pairs:
            return False, pair
    return True, None


def cyclic_orbits(G: Sequence[str], pairs: set[Pair]) -> list[Orbit]:
    """Partition a closed pair set into orbits of the cyclic step."""
    names = list(G)
    seen: set[Pair] = set()
    orbits: list[Orbit] = []
    for start in sorted(pairs):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        cur = _step(names, start)
        while cur is not None and cur != start:
            if cur not in pairs:
                raise NotClosed(f"pair set is not closed at {cur}")
            if cur in seen:
                break  # joined another orbit's tail: cannot happen when closed
            orbit.append(cur)
            seen.add(cur)
            cur = _step(names, cur)
        orbits.append(Orbit(tuple(orbit)))
    return orbits


def solve_primitive(
    G: Sequence[str], u: Sequence[LetterPoly], alphabet: Alphabet | None = None
) -> CycSum:
    """Return f with df/dg_k = u_k for all k, or raise.

    Raises NotACocycle when sum [g_k, u_k] != 0 and NotSolvable when the
    support fails validation or the verified reconstruction does not match.
    """
    names = list(G)
    if len(names) != len(u):
        raise ValueError("need one candidate per generator")
    if alphabet is None:
        alphabet = abstract_alphabet(names)
    for n in names:
        if n not in alphabet:
            raise UnknownLetter(f"generator {n!r} not in alphabet")
    u = [LetterPoly(alphabet, ui.terms) for ui in u]

    total = LetterPoly.zero(alphabet)
    for n, ui in zip(names, u):
        total = total + LetterPoly.word(alphabet, (n,)).commutator(ui)
    if not total.is_zero():
        raise NotACocycle("sum of commutators [g_k, u_k] is nonzero")

    ok, witness = validate(names, u)
    if not ok:
        raise NotSolvable(f"candidate support fails the cyclic-step closure at {witness}")

    f = CycSum.zero(alphabet)
    for orbit in cyclic_orbits(names, _pair_set(u)):
        k, w = orbit.representative
        candidate = CycSum.word(alphabet, (names[k],) + w)
        dk = necklace_derivative(candidate, names[k])
        base = dk.terms.get(w)
        if base is None:
            raise NotSolvable(f"degenerate orbit at {(k, w)}")
        target = u[k].terms.get(w, Gauss(0))
        f = f + (target * base.inverse()) * candidate

    for n, ui in zip(names, u):
        if necklace_derivative(f, n) != ui:
            raise NotSolvable(f"no primitive matches the derivative at {n!r}")
    return f
