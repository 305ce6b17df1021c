"""Expression parser and printer for path-algebra and necklace values.

Grammar (whitespace-insensitive)::

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor+
    factor := coeff | atom ("^" INT)? | "(" expr ")" ("^" INT)?
            | "[" expr "," expr "]" ("^" INT)?
    atom   := NAME ("*")?
    coeff  := RAT | RAT "i" | "(" ["-"] RAT ["i"] ("+"|"-") RAT "i" ")"

Juxtaposition is the product in function-composition order, ``[p,q]`` is the
commutator sugar.  Names are validated against the quiver (arrows, zigzag
aliases, ``e1``/``e2``) or against a declared letter alphabet.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, SpecMismatch
from .necklace import Alphabet, CycSum, LetterPoly
from .quiver import NCPoly, PathWord, QuiverSpec
from .scalars import Gauss

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*\*?)|(?P<sym>[-+()\[\],^]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r} at {pos}", pos)
        if m.lastgroup == "rat":
            tokens.append(("rat", Fraction(m.group("rat")), m.start("rat")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("sym", m.group("sym"), m.start("sym")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent evaluator; the algebra adapter supplies semantics."""

    def __init__(self, text: str, algebra):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.alg = algebra

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect_sym(self, s: str):
        kind, val, pos = self.next()
        if kind != "sym" or val != s:
            raise ParseError(f"expected {s!r} at position {pos}", pos)

    def parse(self):
        v = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r} at position {pos}", pos)
        return v

    def expr(self):
        sign = 1
        kind, val, _ = self.peek()
        if kind == "sym" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        v = self.term()
        if sign < 0:
            v = self.alg.neg(v)
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.next()
                t = self.term()
                v = self.alg.sub(v, t) if val == "-" else self.alg.add(v, t)
            else:
                return v

    def term(self):
        v = None
        while True:
            kind, val, _ = self.peek()
            if kind in ("rat", "name") or (kind == "sym" and val in "(["):
                f = self.factor()
                v = f if v is None else self.alg.mul(v, f)
            else:
                break
        if v is None:
            kind, val, pos = self.peek()
            raise ParseError(f"expected a term at position {pos}", pos)
        return v

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "rat":
            self.next()
            c = Gauss(val)
            nk, nv, _ = self.peek()
            if nk == "name" and nv == "i":
                self.next()
                c = Gauss(0, val)
            return self.alg.scalar(c)
        if kind == "name":
            if val == "i":
                self.next()
                return self.alg.scalar(Gauss(0, 1))
            self.next()
            return self._maybe_pow(self.alg.atom(val, pos))
        if kind == "sym" and val == "(":
            save = self.k
            c = self._try_complex_literal()
            if c is not None:
                return self.alg.scalar(c)
            self.k = save
            self.next()
            v = self.expr()
            self.expect_sym(")")
            return self._maybe_pow(v)
        if kind == "sym" and val == "[":
            self.next()
            p = self.expr()
            self.expect_sym(",")
            q = self.expr()
            self.expect_sym("]")
            return self._maybe_pow(self.alg.sub(self.alg.mul(p, q), self.alg.mul(q, p)))
        raise ParseError(f"unexpected token {val!r} at position {pos}", pos)

    def _maybe_pow(self, v):
        kind, val, _ = self.peek()
        if kind == "sym" and val == "^":
            self.next()
            nk, nv, pos = self.next()
            if nk != "rat" or nv.denominator != 1:
                raise ParseError(f"exponent must be an integer at {pos}", pos)
            n = int(nv)
            if n < 0:
                raise ParseError(f"negative exponent at {pos}", pos)
            out = self.alg.unit()
            for _ in range(n):
                out = self.alg.mul(out, v)
            return out
        return v

    def _try_complex_literal(self):
        """Parse "(" [-] RAT ["i"] (("+"|"-") RAT "i")? ")" or fail silently."""
        k0 = self.k
        try:
            self.next()  # "("
            sign = 1
            kind, val, _ = self.peek()
            if kind == "sym" and val == "-":
                self.next()
                sign = -1
            kind, val, _ = self.next()
            if kind != "rat":
                raise ParseError("not a literal")
            first = sign * val
            first_imag = False
            kind, val, _ = self.peek()
            if kind == "name" and val == "i":
                self.next()
                first_imag = True
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                if first_imag:
                    raise ParseError("not a literal")
                self.next()
                s2 = -1 if val == "-" else 1
                kind, val, _ = self.next()
                if kind != "rat":
                    raise ParseError("not a literal")
                kind2, val2, _ = self.next()
                if kind2 != "name" or val2 != "i":
                    raise ParseError("not a literal")
                kind3, val3, _ = self.next()
                if kind3 != "sym" or val3 != ")":
                    raise ParseError("not a literal")
                return Gauss(first, s2 * val)
            if kind == "sym" and val == ")":
                self.next()
                return Gauss(0, first) if first_imag else Gauss(first)
            raise ParseError("not a literal")
        except (ParseError, IndexError):
            self.k = k0
            return None


def _split_word(name: str, vocab) -> list[str] | None:
    """Split a maximal NAME token into known atom names, longest match first."""
    if not name:
        return []
    for end in range(len(name), 0, -1):
        head = name[:end]
        if head in vocab:
            rest = _split_word(name[end:], vocab)
            if rest is not None:
                return [head] + rest
    return None


class _NCAlgebra:
    def __init__(self, spec: QuiverSpec):
        self.spec = spec
        vocab = {"e1", "e2"}
        vocab.update(spec.arrow_names)
        vocab.update(spec.aliases)
        self.vocab = vocab

    def scalar(self, c: Gauss) -> NCPoly:
        return c * self.spec.one()

    def unit(self) -> NCPoly:
        return self.spec.one()

    def atom(self, name: str, pos: int) -> NCPoly:
        spec = self.spec
        if name in ("x", "x*", "y", "y*") and name not in spec.aliases:
            name = name[0] + "1" + name[1:]
        try:
            if name in self.vocab:
                return spec.element(name)
            parts = _split_word(name, self.vocab)
            if parts is None:
                raise SpecMismatch(f"unknown arrow {name!r} for rank {spec.r}")
            out = spec.one()
            for n in parts:
                out = out * spec.element(n)
            return out
        except SpecMismatch as e:
            raise ParseError(f"{e} (at position {pos})", pos) from None

    @staticmethod
    def add(p, q):
        return p + q

    @staticmethod
    def sub(p, q):
        return p - q

    @staticmethod
    def mul(p, q):
        return p * q

    @staticmethod
    def neg(p):
        return -p


class _LetterAlgebra:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def scalar(self, c: Gauss) -> LetterPoly:
        return LetterPoly(self.alphabet, {(): c})

    def unit(self) -> LetterPoly:
        return LetterPoly(self.alphabet, {(): Gauss(1)})

    def atom(self, name: str, pos: int) -> LetterPoly:
        if name in self.alphabet:
            return LetterPoly.word(self.alphabet, (name,))
        parts = _split_word(name, self.alphabet.index)
        if parts is None:
            raise ParseError(f"unknown letter {name!r} at position {pos}", pos)
        return LetterPoly.word(self.alphabet, parts)

    add = staticmethod(lambda p, q: p + q)
    sub = staticmethod(lambda p, q: p - q)
    mul = staticmethod(lambda p, q: p * q)
    neg = staticmethod(lambda p: -p)


def parse_ncpoly(text: str, spec: QuiverSpec) -> NCPoly:
    return _Parser(text, _NCAlgebra(spec)).parse()


def parse_letterpoly(text: str, alphabet: Alphabet) -> LetterPoly:
    return _Parser(text, _LetterAlgebra(alphabet)).parse()


def parse_cycsum(text: str, alphabet: Alphabet) -> CycSum:
    lp = parse_letterpoly(text, alphabet)
    return CycSum(alphabet, lp.terms)


# ---------------------------------------------------------------------------
# printing


def _coeff_prefix(c: Gauss) -> tuple[str, str]:
    """Return (sign, magnitude-string); magnitude "" means coefficient 1."""
    if c.is_real():
        sign = "-" if c.re < 0 else "+"
        mag = abs(c.re)
        return sign, ("" if mag == 1 else str(mag))
    if not c.re:  # pure imaginary
        sign = "-" if c.im < 0 else "+"
        return sign, f"{abs(c.im)}i"
    return "+", str(c)


def _join_terms(parts: list[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    chunks = []
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            chunks.append(body if sign == "+" else f"-{body}")
        else:
            chunks.append(f"{sign} {body}")
    return " ".join(chunks)


def _word_body(names: list[str]) -> str:
    out = []
    k = 0
    while k < len(names):
        j = k
        while j < len(names) and names[j] == names[k]:
            j += 1
        out.append(names[k] if j - k == 1 else f"{names[k]}^{j - k}")
        k = j
    return " ".join(out)


def poly_str(p: NCPoly, aliases: bool = True) -> str:
    """Canonical text form; ``aliases`` prints the orientation alphabet."""
    spec = p.spec
    rev = {}
    if aliases:
        for alias, (sign, raw) in spec.aliases.items():
            rev[raw] = (sign, alias)
    parts = []
    for w, c in p.sorted_terms():
        if len(w) == 0:
            sign, mag = _coeff_prefix(c)
            body = f"e{w.source}" if mag == "" else f"{mag} e{w.source}"
            parts.append((sign, body))
            continue
        names = []
        total = c
        for n in w.arrows:
            if n in rev:
                s, alias = rev[n]
                if s < 0:
                    total = -total
                names.append(alias)
            else:
                names.append(n)
        sign, mag = _coeff_prefix(total)
        body = _word_body(names)
        if mag:
            body = f"{mag} {body}"
        parts.append((sign, body))
    return _join_terms(parts)


def letterpoly_str(p: LetterPoly) -> str:
    parts = []
    for w, c in p.sorted_terms():
        sign, mag = _coeff_prefix(c)
        if len(w) == 0:
            parts.append((sign, mag if mag else "1"))
            continue
        body = _word_body(list(w))
        if mag:
            body = f"{mag} {body}"
        parts.append((sign, body))
    return _join_terms(parts)


def cycsum_str(f: CycSum) -> str:
    parts = []
    for w, c in f.sorted_terms():
        sign, mag = _coeff_prefix(c)
        body = _word_body(list(w))
        if mag:
            body = f"{mag} {body}"
        parts.append((sign, body))
    return _join_terms(parts)
