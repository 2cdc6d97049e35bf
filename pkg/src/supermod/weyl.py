"""The Weyl superalgebra of differential operators on the super-line.

Elements are finite sums of normal-ordered words  t^k * D^l * c  where
k is any integer, l >= 0, D = t*d/dt is the Euler operator, and c is one
of the four Clifford units

    1,   theta*dtheta,   theta,   dtheta

acting on the odd variable theta (dtheta = d/dtheta).  The even part of a
word is the t/D factor; the unit 1 and theta*dtheta are even, theta and
dtheta are odd.

Multiplication normal-orders via  D^l t^m = t^m (D + m)^l  and the Clifford
relations  dtheta*theta = 1 - theta*dtheta,  theta^2 = dtheta^2 = 0.  The
defining representation on Laurent superfunctions  f = sum c_n t^n theta^eps
is :meth:`SDElement.apply`; it is faithful, which the tests use to cross-check
the normal-ordering arithmetic.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator

from .scalars import ONE as SC_ONE
from .scalars import Scalar, ScalarParseError, render_linear, scalar

__all__ = [
    "CF_ONE",
    "CF_N",
    "CF_THETA",
    "CF_DTHETA",
    "SDElement",
    "SuperLaurent",
    "parse_operator",
    "OperatorParseError",
]

# Clifford units, in the fixed basis order used for normal forms.
CF_ONE, CF_N, CF_THETA, CF_DTHETA = range(4)

_CF_PARITY = (0, 0, 1, 1)
_CF_TEXT = ("", "theta*dtheta", "theta", "dtheta")

# Products c1*c2 as tuples of (sign, unit); composition is "c2 acts first"
# when the word is applied to a function, i.e. plain operator composition.
_CF_MUL: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {
    (CF_ONE, CF_ONE): ((1, CF_ONE),),
    (CF_ONE, CF_N): ((1, CF_N),),
    (CF_ONE, CF_THETA): ((1, CF_THETA),),
    (CF_ONE, CF_DTHETA): ((1, CF_DTHETA),),
    (CF_N, CF_ONE): ((1, CF_N),),
    (CF_N, CF_N): ((1, CF_N),),
    (CF_N, CF_THETA): ((1, CF_THETA),),
    (CF_N, CF_DTHETA): (),
    (CF_THETA, CF_ONE): ((1, CF_THETA),),
    (CF_THETA, CF_N): (),
    (CF_THETA, CF_THETA): (),
    (CF_THETA, CF_DTHETA): ((1, CF_N),),
    (CF_DTHETA, CF_ONE): ((1, CF_DTHETA),),
    (CF_DTHETA, CF_N): ((1, CF_DTHETA),),
    (CF_DTHETA, CF_THETA): ((1, CF_ONE), (-1, CF_N)),
    (CF_DTHETA, CF_DTHETA): (),
}


class OperatorParseError(ScalarParseError):
    """Text that does not match the operator grammar."""


Word = tuple[int, int, int]  # (t-power, D-power, clifford unit)


class SDElement:
    """A finite sum of normal-ordered words t^k D^l c with Scalar coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Word, Scalar] | None = None):
        self._terms = {w: c for w, c in (terms or {}).items() if not c.is_zero}

    # ------------------------------------------------------------------
    @staticmethod
    def zero() -> "SDElement":
        return SDElement()

    @staticmethod
    def word(k: int, l: int, c: int = CF_ONE, coeff: Scalar | int | Fraction = 1,
             ) -> "SDElement":
        if l < 0:
            raise ValueError("D-power must be nonnegative")
        if c not in (CF_ONE, CF_N, CF_THETA, CF_DTHETA):
            raise ValueError(f"unknown Clifford unit {c!r}")
        return SDElement({(k, l, c): scalar(coeff)})

    @staticmethod
    def one() -> "SDElement":
        return SDElement.word(0, 0)

    def items(self) -> Iterator[tuple[Word, Scalar]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, word: Word) -> Scalar:
        return self._terms.get(word, SC_ONE - SC_ONE)

    # ------------------------------------------------------------------
    # linear structure

    def __add__(self, other: "SDElement") -> "SDElement":
        if not isinstance(other, SDElement):
            return NotImplemented
        terms = dict(self._terms)
        for w, c in other._terms.items():
            if w in terms:
                s = terms[w] + c
                if s.is_zero:
                    del terms[w]
                else:
                    terms[w] = s
            else:
                terms[w] = c
        return SDElement(terms)

    def __sub__(self, other: "SDElement") -> "SDElement":
        return self + (-other)

    def __neg__(self) -> "SDElement":
        return SDElement({w: -c for w, c in self._terms.items()})

    def scale(self, factor: Scalar | int | Fraction) -> "SDElement":
        factor = scalar(factor)
        if factor.is_zero:
            return SDElement()
        return SDElement({w: c * factor for w, c in self._terms.items()})

    # ------------------------------------------------------------------
    # multiplication

    def __mul__(self, other):
        if isinstance(other, SDElement):
            return self._mul_sd(other)
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def _mul_sd(self, other: "SDElement") -> "SDElement":
        # (t^k1 D^l1 c1)(t^k2 D^l2 c2): push D^l1 through t^k2 binomially,
        # multiply the Clifford units; the t/D factor is even so no sign.
        acc: dict[Word, Scalar] = {}
        for (k1, l1, c1), ca in self._terms.items():
            for (k2, l2, c2), cb in other._terms.items():
                cf = _CF_MUL[(c1, c2)]
                if not cf:
                    continue
                coeff = ca * cb
                for j in range(l1 + 1):
                    factor = math.comb(l1, j) * k2 ** (l1 - j)
                    if factor == 0:
                        continue
                    value = coeff * factor
                    for sign, unit in cf:
                        w = (k1 + k2, j + l2, unit)
                        inc = value if sign > 0 else -value
                        if w in acc:
                            acc[w] = acc[w] + inc
                        else:
                            acc[w] = inc
        return SDElement(acc)

    # ------------------------------------------------------------------
    # super structure

    def parity(self) -> int | None:
        """0 (even), 1 (odd), or None for mixed/zero elements."""
        parities = {_CF_PARITY[c] for (_, _, c) in self._terms}
        if len(parities) == 1:
            return parities.pop()
        return None

    def supercommutator(self, other: "SDElement") -> "SDElement":
        """[x, y] = x y - (-1)^{|x||y|} y x for homogeneous x, y."""
        if self.is_zero or other.is_zero:
            return SDElement()
        px, py = self.parity(), other.parity()
        if px is None or py is None:
            raise ValueError("supercommutator requires homogeneous arguments")
        if px and py:
            return self._mul_sd(other) + other._mul_sd(self)
        return self._mul_sd(other) - other._mul_sd(self)

    # ------------------------------------------------------------------
    # the defining action on Laurent superfunctions

    def apply(self, f: "SuperLaurent") -> "SuperLaurent":
        acc: dict[tuple[int, int], Scalar] = {}
        for (k, l, c), coeff in self._terms.items():
            for (n, th), fc in f._terms.items():
                if c == CF_N:
                    if not th:
                        continue
                    new_th = 1
                elif c == CF_THETA:
                    if th:
                        continue
                    new_th = 1
                elif c == CF_DTHETA:
                    if not th:
                        continue
                    new_th = 0
                else:
                    new_th = th
                factor = n ** l
                if factor == 0:
                    continue
                value = coeff * fc if factor == 1 else coeff * fc * factor
                key = (n + k, new_th)
                if key in acc:
                    acc[key] = acc[key] + value
                else:
                    acc[key] = value
        return SuperLaurent(acc)

    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SDElement):
            return NotImplemented
        if set(self._terms) != set(other._terms):
            return False
        return all(c == other._terms[w] for w, c in self._terms.items())

    def __hash__(self) -> int:
        return hash(frozenset((w, hash(c)) for w, c in self._terms.items()))

    def render(self) -> str:
        return render_linear(
            (self._terms[w], _word_text(w)) for w in sorted(self._terms))

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SDElement({self.render()!r})"


def _word_text(word: Word) -> str:
    k, l, c = word
    parts = []
    if k:
        parts.append(f"t^{k}" if k != 1 else "t")
    if l:
        parts.append(f"D^{l}" if l != 1 else "D")
    if c != CF_ONE:
        parts.append(_CF_TEXT[c])
    return "*".join(parts) if parts else "1"


class SuperLaurent:
    """An element of C[t, t^-1, theta]: sum of c_{n,eps} t^n theta^eps."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[tuple[int, int], Scalar] | None = None):
        self._terms = {m: c for m, c in (terms or {}).items() if not c.is_zero}

    @staticmethod
    def monomial(n: int, theta: int = 0, coeff: Scalar | int | Fraction = 1,
                 ) -> "SuperLaurent":
        if theta not in (0, 1):
            raise ValueError("theta exponent must be 0 or 1")
        return SuperLaurent({(n, theta): scalar(coeff)})

    @staticmethod
    def zero() -> "SuperLaurent":
        return SuperLaurent()

    def items(self) -> Iterator[tuple[tuple[int, int], Scalar]]:
        return iter(self._terms.items())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def parity(self) -> int | None:
        parities = {th for (_, th) in self._terms}
        if len(parities) == 1:
            return parities.pop()
        return None

    def __add__(self, other: "SuperLaurent") -> "SuperLaurent":
        terms = dict(self._terms)
        for m, c in other._terms.items():
            if m in terms:
                s = terms[m] + c
                if s.is_zero:
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return SuperLaurent(terms)

    def __sub__(self, other: "SuperLaurent") -> "SuperLaurent":
        return self + (-other)

    def __neg__(self) -> "SuperLaurent":
        return SuperLaurent({m: -c for m, c in self._terms.items()})

    def scale(self, factor: Scalar | int | Fraction) -> "SuperLaurent":
        factor = scalar(factor)
        if factor.is_zero:
            return SuperLaurent()
        return SuperLaurent({m: c * factor for m, c in self._terms.items()})

    __rmul__ = __mul__ = scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperLaurent):
            return NotImplemented
        if set(self._terms) != set(other._terms):
            return False
        return all(c == other._terms[m] for m, c in self._terms.items())

    def __hash__(self) -> int:
        return hash(frozenset((m, hash(c)) for m, c in self._terms.items()))

    def render(self) -> str:
        def text(n: int, th: int) -> str:
            parts = []
            if n:
                parts.append(f"t^{n}" if n != 1 else "t")
            if th:
                parts.append("theta")
            return "*".join(parts) if parts else "1"

        return render_linear(
            (self._terms[m], text(*m)) for m in sorted(self._terms))

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SuperLaurent({self.render()!r})"


# ----------------------------------------------------------------------
# operator expressions

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class _OperatorParser:
    """Recursive-descent parser for operator expressions.

    Same shape as the scalar grammar, with the reserved identifiers t, D,
    theta, dtheta denoting the algebra generators, other identifiers
    denoting scalar parameters, and * meaning the (noncommutative) product.
    Division and negative powers are only defined where the operand is a
    pure scalar or a power of t.
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip():
                    raise OperatorParseError(
                        f"unexpected character {text[pos:].strip()[0]!r} in {text!r}")
                break
            tokens.append(m.group(m.lastgroup))
            pos = m.end()
        return tokens

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise OperatorParseError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def run(self) -> SDElement:
        value = self.expr()
        if self.peek() is not None:
            raise OperatorParseError(
                f"trailing input {' '.join(self.tokens[self.pos:])!r} in {self.text!r}")
        return value

    def expr(self) -> SDElement:
        value = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                value = value + self.term()
            else:
                value = value - self.term()
        return value

    def term(self) -> SDElement:
        value = self.factor()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                value = value * self.factor()
            else:
                value = value * _invert(self.factor(), self.text)
        return value

    def factor(self) -> SDElement:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> SDElement:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.take()
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        tok = self.take()
        if not tok.isdigit():
            raise OperatorParseError(f"expected integer exponent in {self.text!r}")
        return _power(base, sign * int(tok), self.text)

    def atom(self) -> SDElement:
        tok = self.take()
        if tok.isdigit():
            return SDElement.one().scale(int(tok))
        if tok == "(":
            value = self.expr()
            if self.peek() != ")":
                raise OperatorParseError(f"missing ')' in {self.text!r}")
            self.take()
            return value
        if tok == "t":
            return SDElement.word(1, 0)
        if tok == "D":
            return SDElement.word(0, 1)
        if tok == "theta":
            return SDElement.word(0, 0, CF_THETA)
        if tok == "dtheta":
            return SDElement.word(0, 0, CF_DTHETA)
        if tok[0].isalpha() or tok[0] == "_":
            return SDElement.one().scale(Scalar.parameter(tok))
        raise OperatorParseError(f"unexpected token {tok!r} in {self.text!r}")


def _pure_scalar(x: SDElement) -> Scalar | None:
    if x.is_zero:
        return SC_ONE - SC_ONE
    terms = dict(x.items())
    if set(terms) == {(0, 0, CF_ONE)}:
        return terms[(0, 0, CF_ONE)]
    return None


def _pure_t_power(x: SDElement) -> tuple[int, Scalar] | None:
    terms = dict(x.items())
    if len(terms) != 1:
        return None
    ((k, l, c), coeff), = terms.items()
    if l == 0 and c == CF_ONE:
        return k, coeff
    return None


def _invert(x: SDElement, text: str) -> SDElement:
    s = _pure_scalar(x)
    if s is not None:
        if s.is_zero:
            raise OperatorParseError(f"division by zero in {text!r}")
        return SDElement.one().scale(SC_ONE / s)
    tp = _pure_t_power(x)
    if tp is not None:
        k, coeff = tp
        return SDElement.word(-k, 0, CF_ONE, SC_ONE / coeff)
    raise OperatorParseError(f"cannot divide by a non-scalar operator in {text!r}")


def _power(x: SDElement, exponent: int, text: str) -> SDElement:
    if exponent == 0:
        return SDElement.one()
    if exponent < 0:
        return _power(_invert(x, text), -exponent, text)
    out = x
    for _ in range(exponent - 1):
        out = out * x
    return out


def parse_operator(text: str) -> SDElement:
    """Parse an operator expression in t, D, theta, dtheta and parameters."""
    return _OperatorParser(text).run()
