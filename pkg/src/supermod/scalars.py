"""Exact scalar arithmetic over rational-function fields QQ(p1, ..., pk).

Every coefficient in this package is a :class:`Scalar`: a quotient num/den
of multivariate polynomials with rational coefficients in a finite set of
named parameters (``alpha``, ``b``, ``lambda_``, ...).  Purely rational
scalars are the special case of an empty parameter set.

The representation is lazy.  Sums and products keep an unreduced num/den
pair (sparse polynomial arithmetic only, via sympy's polys rings), and the
gcd cancellation needed for a canonical form runs only where canonical data
is actually required: equality against literals, hashing, printing, and
specialization.  The canonical form is the reduced fraction scaled so that
numerator and denominator together have coprime integer content and the
leading coefficient of the denominator (lex order over the sorted parameter
list) is positive.  Two equal scalars always print identically, and every
printed scalar re-parses to an equal value.

Parameter names are identifiers; the four operator identifiers ``t``, ``D``,
``theta``, ``dtheta`` are reserved and rejected, so scalar expressions can be
embedded in operator expressions without ambiguity.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterator, Mapping, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring as _sympy_ring

__all__ = [
    "Scalar",
    "ScalarError",
    "ScalarDivisionError",
    "SingularSpecializationError",
    "ScalarParseError",
    "scalar",
    "ZERO",
    "ONE",
    "RESERVED_NAMES",
]

ScalarLike = Union["Scalar", int, Fraction, str]

#: identifiers that the operator grammar claims for itself
RESERVED_NAMES = frozenset({"t", "D", "theta", "dtheta"})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class ScalarError(Exception):
    """Base class for scalar-arithmetic failures."""


class ScalarDivisionError(ScalarError, ZeroDivisionError):
    """Division by an identically zero scalar."""


class SingularSpecializationError(ScalarError, ZeroDivisionError):
    """A specialization landed on a zero of a denominator."""


class ScalarParseError(ScalarError, ValueError):
    """Text that does not match the scalar grammar."""


# One polynomial ring per sorted parameter tuple, shared by every Scalar
# using that parameter set; sharing makes "same ring" an identity check.
_RING_CACHE: dict[tuple[str, ...], object] = {}


def _get_ring(names: tuple[str, ...]):
    try:
        return _RING_CACHE[names]
    except KeyError:
        pass
    made = _sympy_ring(",".join(names), QQ, lex)
    # sympy returns (ring,) for an empty name list and (ring, *gens) otherwise
    rng = made[0] if isinstance(made, tuple) else made
    _RING_CACHE[names] = rng
    return rng


def _lift(poly, old_names: tuple[str, ...], new_names: tuple[str, ...]):
    """Re-express ``poly`` from QQ[old_names] inside QQ[new_names]."""
    if old_names == new_names:
        return poly
    target = _get_ring(new_names)
    pos = {n: i for i, n in enumerate(new_names)}
    width = len(new_names)
    data = {}
    for mon, coeff in poly.terms():
        new_mon = [0] * width
        for name, exp in zip(old_names, mon):
            if exp:
                new_mon[pos[name]] = exp
        data[tuple(new_mon)] = coeff
    return target.from_dict(data)


def _to_qq(value) -> object:
    """Coerce an int/Fraction/str rational literal to a QQ element."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        try:
            frac = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"not a rational literal: {value!r}") from exc
        return QQ(frac.numerator, frac.denominator)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational value")


class Scalar:
    """An element of QQ(p1, ..., pk), with lazy fraction normalization."""

    __slots__ = ("_names", "_num", "_den", "_canon")

    def __init__(self, names: tuple[str, ...], num, den, _skip_checks: bool = False):
        # Internal constructor; use scalar()/Scalar.parameter()/Scalar.parse().
        if not _skip_checks and not den:
            raise ScalarDivisionError("denominator is identically zero")
        self._names = names
        self._num = num
        self._den = den
        self._canon = None

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def from_rational(value: int | Fraction | str) -> "Scalar":
        rng = _get_ring(())
        return Scalar((), rng.ground_new(_to_qq(value)), rng.one, _skip_checks=True)

    @staticmethod
    def parameter(name: str) -> "Scalar":
        if not _NAME_RE.match(name):
            raise ScalarParseError(f"not a valid parameter name: {name!r}")
        if name in RESERVED_NAMES:
            raise ScalarParseError(
                f"{name!r} is a reserved operator identifier and cannot name a parameter"
            )
        names = (name,)
        rng = _get_ring(names)
        return Scalar(names, rng.gens[0], rng.one, _skip_checks=True)

    @staticmethod
    def parse(text: str) -> "Scalar":
        return _ScalarParser(text).run()

    # ------------------------------------------------------------------
    # coercion helpers

    def _unify(self, other: "Scalar"):
        if self._names == other._names:
            return self._names, self._num, self._den, other._num, other._den
        names = tuple(sorted(set(self._names) | set(other._names)))
        return (
            names,
            _lift(self._num, self._names, names),
            _lift(self._den, self._names, names),
            _lift(other._num, other._names, names),
            _lift(other._den, other._names, names),
        )

    @staticmethod
    def _coerce(value: ScalarLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar.from_rational(value)
        if isinstance(value, str):
            return Scalar.parse(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Scalar")

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other: ScalarLike) -> "Scalar":
        other = self._coerce(other)
        names, na, da, nb, db = self._unify(other)
        if da == db:
            return Scalar(names, na + nb, da, _skip_checks=True)
        return Scalar(names, na * db + nb * da, da * db, _skip_checks=True)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "Scalar":
        other = self._coerce(other)
        names, na, da, nb, db = self._unify(other)
        if da == db:
            return Scalar(names, na - nb, da, _skip_checks=True)
        return Scalar(names, na * db - nb * da, da * db, _skip_checks=True)

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return self._coerce(other).__sub__(self)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        other = self._coerce(other)
        names, na, da, nb, db = self._unify(other)
        return Scalar(names, na * nb, da * db, _skip_checks=True)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        other = self._coerce(other)
        if other.is_zero:
            raise ScalarDivisionError("division by zero scalar")
        names, na, da, nb, db = self._unify(other)
        return Scalar(names, na * db, da * nb, _skip_checks=True)

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        return self._coerce(other).__truediv__(self)

    def __neg__(self) -> "Scalar":
        return Scalar(self._names, -self._num, self._den, _skip_checks=True)

    def __pow__(self, exponent: int) -> "Scalar":
        if not isinstance(exponent, int):
            raise TypeError("scalar exponents must be integers")
        if exponent == 0:
            return ONE
        if exponent < 0:
            if self.is_zero:
                raise ScalarDivisionError("zero scalar raised to a negative power")
            return Scalar(
                self._names, self._den ** (-exponent), self._num ** (-exponent),
                _skip_checks=True,
            )
        return Scalar(self._names, self._num ** exponent, self._den ** exponent,
                      _skip_checks=True)

    # ------------------------------------------------------------------
    # predicates and comparisons

    @property
    def is_zero(self) -> bool:
        return not self._num

    @property
    def is_one(self) -> bool:
        return self._num == self._den

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        _, na, da, nb, db = self._unify(other)
        if da == db:
            return na == nb
        return na * db == nb * da

    def __hash__(self) -> int:
        names, num, den = self._canonical()
        return hash((names, tuple(num.terms()), tuple(den.terms())))

    # ------------------------------------------------------------------
    # canonical form

    def _canonical(self):
        """Reduced, content-normalized (names, num, den) with shrunk names."""
        if self._canon is not None:
            return self._canon
        num, den = self._num, self._den
        names = self._names
        if not num:
            rng = _get_ring(())
            self._canon = ((), rng.zero, rng.one)
            return self._canon
        g = num.gcd(den)
        num, den = num.quo(g), den.quo(g)
        coeffs = [c for _, c in num.terms()] + [c for _, c in den.terms()]
        denom_lcm = 1
        numer_gcd = 0
        for c in coeffs:
            denom_lcm = math.lcm(denom_lcm, int(c.denominator))
            numer_gcd = math.gcd(numer_gcd, int(c.numerator))
        scale = QQ(denom_lcm, numer_gcd)
        num = num.mul_ground(scale)
        den = den.mul_ground(scale)
        if den.LC < 0:
            num, den = -num, -den
        used = set()
        for mon, _ in num.terms():
            used.update(i for i, e in enumerate(mon) if e)
        for mon, _ in den.terms():
            used.update(i for i, e in enumerate(mon) if e)
        if len(used) < len(names):
            kept = tuple(names[i] for i in sorted(used))
            num = _project(num, names, kept)
            den = _project(den, names, kept)
            names = kept
        self._canon = (names, num, den)
        return self._canon

    @property
    def parameters(self) -> tuple[str, ...]:
        """Sorted names of the parameters this value actually depends on."""
        return self._canonical()[0]

    @property
    def is_rational(self) -> bool:
        return not self.parameters

    def as_fraction(self) -> Fraction:
        names, num, den = self._canonical()
        if names:
            raise ScalarError(f"scalar {self} is not a rational number")
        n = num.LC if num else QQ(0)
        d = den.LC
        return Fraction(int(n.numerator), int(n.denominator)) / Fraction(
            int(d.numerator), int(d.denominator))

    # ------------------------------------------------------------------
    # specialization

    def specialize(self, assignments: Mapping[str, int | Fraction | str]) -> "Scalar":
        """Substitute rational values for a subset of the parameters.

        Names in ``assignments`` that this scalar does not depend on are
        ignored, so one assignment map can be applied across a whole vector
        of coefficients.  Raises :class:`SingularSpecializationError` when
        the (reduced) denominator vanishes at the assignment.
        """
        names, num, den = self._canonical()
        assign = {}
        for name, value in assignments.items():
            if name in names:
                assign[name] = _to_qq(value)
        if not assign:
            return self
        kept = tuple(n for n in names if n not in assign)
        new_num = _evaluate(num, names, assign, kept)
        new_den = _evaluate(den, names, assign, kept)
        if not new_den:
            raise SingularSpecializationError(
                f"denominator of {self} vanishes under {dict(assignments)!r}")
        return Scalar(kept, new_num, new_den, _skip_checks=True)

    # ------------------------------------------------------------------
    # printing

    def render(self) -> str:
        names, num, den = self._canonical()
        if not num:
            return "0"
        num_text = _poly_text(num, names)
        if den == _get_ring(names).one:
            return num_text
        den_text, den_needs_parens = _den_text(den, names)
        if len(num.terms()) > 1 and not num_text.startswith("-("):
            num_text = f"({num_text})"
        if den_needs_parens:
            den_text = f"({den_text})"
        return f"{num_text}/{den_text}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Scalar({self.render()!r})"


def _project(poly, names: tuple[str, ...], kept: tuple[str, ...]):
    """Drop unused generators (all exponents known to be zero)."""
    idx = [names.index(n) for n in kept]
    target = _get_ring(kept)
    data = {}
    for mon, coeff in poly.terms():
        data[tuple(mon[i] for i in idx)] = coeff
    return target.from_dict(data)


def _evaluate(poly, names: tuple[str, ...], assign: dict[str, object],
              kept: tuple[str, ...]):
    """Evaluate the assigned generators, keeping the rest symbolic."""
    target = _get_ring(kept)
    kept_idx = [names.index(n) for n in kept]
    data: dict[tuple[int, ...], object] = {}
    for mon, coeff in poly.terms():
        value = coeff
        for i, name in enumerate(names):
            exp = mon[i]
            if exp and name in assign:
                value = value * assign[name] ** exp
        key = tuple(mon[i] for i in kept_idx)
        if key in data:
            data[key] = data[key] + value
        else:
            data[key] = value
    return target.from_dict({k: v for k, v in data.items() if v})


# ----------------------------------------------------------------------
# rendering helpers


def _monomial_text(mon: tuple[int, ...], names: tuple[str, ...]) -> str:
    parts = []
    for name, exp in zip(names, mon):
        if exp == 1:
            parts.append(name)
        elif exp:
            parts.append(f"{name}^{exp}")
    return "*".join(parts)


def _term_text(coeff, mon: tuple[int, ...], names: tuple[str, ...]) -> str:
    mono = _monomial_text(mon, names)
    c = int(coeff.numerator) if int(coeff.denominator) == 1 else None
    if c is None:  # non-integer coefficient (only outside canonical form)
        c_text = f"{coeff.numerator}/{coeff.denominator}"
        return f"{c_text}*{mono}" if mono else c_text
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    return f"{c}*{mono}"


def _poly_text(poly, names: tuple[str, ...]) -> str:
    terms = poly.terms()
    if all(coeff < 0 for _, coeff in terms):
        body = _poly_text(-poly, names)
        if len(terms) > 1:
            return f"-({body})"
        return f"-{body}"
    pieces = [_term_text(terms[0][1], terms[0][0], names)]
    for mon, coeff in terms[1:]:
        if coeff < 0:
            pieces.append(" - " + _term_text(-coeff, mon, names))
        else:
            pieces.append(" + " + _term_text(coeff, mon, names))
    return "".join(pieces)


def _den_text(den, names: tuple[str, ...]) -> tuple[str, bool]:
    """Denominator text plus whether it must be parenthesized."""
    text = _poly_text(den, names)
    terms = den.terms()
    if len(terms) > 1:
        return text, True
    mon, coeff = terms[0]
    nontrivial = sum(1 for e in mon if e)
    if nontrivial == 0:
        return text, False  # integer constant
    if nontrivial == 1 and coeff == 1:
        return text, False  # bare name or name^k
    return text, True


# ----------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class _ScalarParser:
    """Recursive-descent parser for the scalar grammar.

    expr   := term  (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | '+' factor | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'
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
                    raise ScalarParseError(
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
            raise ScalarParseError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def run(self) -> Scalar:
        value = self.expr()
        if self.peek() is not None:
            raise ScalarParseError(
                f"trailing input {' '.join(self.tokens[self.pos:])!r} in {self.text!r}")
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                value = value + self.term()
            else:
                value = value - self.term()
        return value

    def term(self) -> Scalar:
        value = self.factor()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                value = value * self.factor()
            else:
                divisor = self.factor()
                if divisor.is_zero:
                    raise ScalarDivisionError(f"division by zero in {self.text!r}")
                value = value / divisor
        return value

    def factor(self) -> Scalar:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> Scalar:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if not tok.isdigit():
                raise ScalarParseError(f"expected integer exponent in {self.text!r}")
            return base ** (sign * int(tok))
        return base

    def atom(self) -> Scalar:
        tok = self.take()
        if tok.isdigit():
            return Scalar.from_rational(int(tok))
        if tok == "(":
            value = self.expr()
            if self.peek() != ")":
                raise ScalarParseError(f"missing ')' in {self.text!r}")
            self.take()
            return value
        if _NAME_RE.match(tok):
            return Scalar.parameter(tok)
        raise ScalarParseError(f"unexpected token {tok!r} in {self.text!r}")


def scalar(value: ScalarLike) -> Scalar:
    """Coerce an int, Fraction, str (scalar grammar), or Scalar to a Scalar."""
    return Scalar._coerce(value)


def render_linear(pairs: Iterator[tuple["Scalar", str]] | list) -> str:
    """Render a linear combination of basis words with Scalar coefficients.

    ``pairs`` yields (coefficient, word-text); the word-text "1" stands for
    the empty word.  Used by every container in the package so that linear
    combinations print consistently.
    """
    pieces = []
    for coeff, text in pairs:
        s = coeff.render()
        if text == "1":
            pieces.append(s if " " not in s else f"({s})")
        elif s == "1":
            pieces.append(text)
        elif s == "-1":
            pieces.append(f"-{text}")
        elif " " in s:
            pieces.append(f"({s})*{text}")
        else:
            pieces.append(f"{s}*{text}")
    if not pieces:
        return "0"
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


ZERO = Scalar.from_rational(0)
ONE = Scalar.from_rational(1)
