"""Concrete modules over differential operators on the punctured line.

Four families, each carrying an exact action of every power t^m (m in Z)
and of the Euler operator D = t*d/dt behind one interface:

``LaurentModule(alpha)``
    Laurent polynomials with a shifted grading: the tokens are the powers
    t^n (n in Z) and D*t^n = (alpha + n) t^n.

``OmegaModule(lam)``
    The polynomial ring in D itself: tokens D^n (n >= 0), with
    D * D^n = D^{n+1} and t^m * D^n = lam^m (D - m)^n expanded in the
    D-power basis.  lam must be invertible, i.e. not literally zero.

``FractionModule(alphas, betas)``
    The ring of rational functions regular away from the poles beta_j, in
    the partial-fraction basis { t^i (i >= 0), (t - beta_j)^{-k} (k >= 1) }.
    d/dt acts covariantly:  d/dt . f = f' + f * sum_j alphas[j]/(t - beta_j).
    The poles are distinct rationals with beta_0 = 0, so t^{-1} is the
    basis token (t - beta_0)^{-1} and t stays invertible.

``DegreeModule(n)``
    The span of t^i d^m (i in Z, 0 <= m < n) where d = d/dt, subject to
    d^n = t:  d . (t^i d^{n-1}) = i t^{i-1} d^{n-1} + t^{i+1}.

Vectors are finite Scalar-linear combinations of family tokens.  Every
token carries a ``bar`` flag; the actions here never look at it, so the
same arithmetic serves the doubled modules built later by the superize
functor (which is where the flag starts to matter).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .scalars import ONE as SC_ONE
from .scalars import Scalar, ScalarParseError, render_linear, scalar

__all__ = [
    "FAMILIES",
    "BasisToken",
    "ModuleVector",
    "DModule",
    "LaurentModule",
    "OmegaModule",
    "FractionModule",
    "DegreeModule",
    "spec_from_json",
    "parse_token",
    "render_token",
    "parse_vector",
    "render_vector",
]

FAMILIES = ("laurent", "omega", "fraction", "degree")


class BasisToken(NamedTuple):
    """One basis vector of a family, with its superize bar flag.

    The index fields are overloaded per family:

    ========  ====  =======================================================
    family    kind  meaning of (i, k)
    ========  ====  =======================================================
    laurent   0     the power t^i
    omega     0     the power D^i, i >= 0
    fraction  0     the power t^i, i >= 0                     (k unused, 0)
    fraction  1     the negative power (t - beta_i)^{-k}, k >= 1
    degree    0     the word t^i d^k, 0 <= k < n
    ========  ====  =======================================================

    The field order makes the natural tuple order a deterministic global
    token order (unbarred before barred), which the elimination code in
    the analysis module relies on.
    """

    family: str
    bar: bool
    kind: int
    i: int
    k: int

    def barred(self) -> "BasisToken":
        return self._replace(bar=True)

    def unbarred(self) -> "BasisToken":
        return self._replace(bar=False)


class ModuleVector:
    """A finite Scalar-linear combination of basis tokens of one family."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[BasisToken, Scalar] | None = None):
        clean: dict[BasisToken, Scalar] = {}
        family = None
        for tok, coeff in (terms or {}).items():
            if family is None:
                family = tok.family
            elif tok.family != family:
                raise ValueError(
                    f"mixed families in one vector: {family!r} and {tok.family!r}")
            if not coeff.is_zero:
                clean[tok] = coeff
        self._terms = clean

    @staticmethod
    def zero() -> "ModuleVector":
        return ModuleVector()

    @staticmethod
    def single(token: BasisToken,
               coeff: Scalar | int | Fraction = 1) -> "ModuleVector":
        return ModuleVector({token: scalar(coeff)})

    def items(self) -> Iterator[tuple[BasisToken, Scalar]]:
        return iter(sorted(self._terms.items()))

    def support(self) -> list[BasisToken]:
        return sorted(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, token: BasisToken) -> Scalar:
        return self._terms.get(token, scalar(0))

    def parity(self) -> int | None:
        """0 or 1 if all tokens share a bar flag, None for mixed or zero."""
        flags = {tok.bar for tok in self._terms}
        if len(flags) != 1:
            return None
        return 1 if flags.pop() else 0

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        merged = dict(self._terms)
        for tok, coeff in other._terms.items():
            acc = merged.get(tok)
            merged[tok] = coeff if acc is None else acc + coeff
        return ModuleVector(merged)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + (-other)

    def __neg__(self) -> "ModuleVector":
        return ModuleVector({tok: -c for tok, c in self._terms.items()})

    def scale(self, factor: Scalar | int | Fraction) -> "ModuleVector":
        f = scalar(factor)
        if f.is_zero:
            return ModuleVector()
        return ModuleVector({tok: c * f for tok, c in self._terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def map_tokens(self, fn) -> "ModuleVector":
        """Rebuild the vector with fn applied to every token (e.g. barring)."""
        out: dict[BasisToken, Scalar] = {}
        for tok, coeff in self._terms.items():
            new = fn(tok)
            acc = out.get(new)
            out[new] = coeff if acc is None else acc + coeff
        return ModuleVector(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self) -> int:
        return hash(frozenset((tok, coeff) for tok, coeff in self._terms.items()))

    def __str__(self) -> str:
        return f"ModuleVector({len(self._terms)} terms)"

    __repr__ = __str__


class DModule:
    """Shared linear plumbing; families fill in the token-level actions."""

    family = ""

    def _t_token(self, m: int, tok: BasisToken) -> ModuleVector:
        raise NotImplementedError

    def _d_token(self, tok: BasisToken) -> ModuleVector:
        raise NotImplementedError

    def act_t(self, m: int, vec: ModuleVector) -> ModuleVector:
        """Multiply by t^m, any integer m."""
        out = ModuleVector.zero()
        for tok, coeff in vec.items():
            out = out + self._t_token(m, tok).scale(coeff)
        return out

    def act_D(self, vec: ModuleVector) -> ModuleVector:
        """Apply the Euler operator D = t*d/dt."""
        out = ModuleVector.zero()
        for tok, coeff in vec.items():
            out = out + self._d_token(tok).scale(coeff)
        return out

    def tokens(self, bound: int) -> list[BasisToken]:
        """All unbarred tokens inside the window bound, in global order."""
        raise NotImplementedError

    @property
    def parameters(self) -> tuple[str, ...]:
        return ()

    def specialize(self, assignments: dict) -> "DModule":
        return self

    def to_json(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ----------------------------------------------------------------------
# Laurent polynomials with shifted D-eigenvalues

class LaurentModule(DModule):
    """Tokens t^n (n in Z); t^m shifts the index, D*t^n = (alpha+n) t^n."""

    family = "laurent"

    def __init__(self, alpha: Scalar | int | Fraction | str = 0):
        self.alpha = Scalar.parse(alpha) if isinstance(alpha, str) else scalar(alpha)

    def token(self, n: int, bar: bool = False) -> BasisToken:
        return BasisToken("laurent", bar, 0, n, 0)

    def _t_token(self, m: int, tok: BasisToken) -> ModuleVector:
        return ModuleVector.single(tok._replace(i=tok.i + m))

    def _d_token(self, tok: BasisToken) -> ModuleVector:
        return ModuleVector.single(tok, self.alpha + tok.i)

    def tokens(self, bound: int) -> list[BasisToken]:
        return [self.token(n) for n in range(-bound, bound + 1)]

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.alpha.parameters

    def specialize(self, assignments: dict) -> "LaurentModule":
        return LaurentModule(self.alpha.specialize(assignments))

    def to_json(self) -> dict:
        return {"family": "laurent", "alpha": self.alpha.render()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentModule) and self.alpha == other.alpha


# ----------------------------------------------------------------------
# The polynomial ring in D, with t acting by shift-and-rescale

class OmegaModule(DModule):
    """Tokens D^n (n >= 0); t^m * D^n = lam^m (D - m)^n, D * D^n = D^{n+1}."""

    family = "omega"

    def __init__(self, lam: Scalar | int | Fraction | str):
        self.lam = Scalar.parse(lam) if isinstance(lam, str) else scalar(lam)
        if self.lam.is_zero:
            raise ValueError("omega parameter must be invertible (nonzero)")

    def token(self, n: int, bar: bool = False) -> BasisToken:
        if n < 0:
            raise ValueError(f"D-power must be >= 0, got {n}")
        return BasisToken("omega", bar, 0, n, 0)

    def _t_token(self, m: int, tok: BasisToken) -> ModuleVector:
        # lam^m (D - m)^n expanded binomially in the D-power basis.
        lam_m = self.lam ** m
        n = tok.i
        terms: dict[BasisToken, Scalar] = {}
        for j in range(n + 1):
            coeff = lam_m * (comb(n, j) * (-m) ** (n - j))
            terms[tok._replace(i=j)] = coeff
        return ModuleVector(terms)

    def _d_token(self, tok: BasisToken) -> ModuleVector:
        return ModuleVector.single(tok._replace(i=tok.i + 1))

    def tokens(self, bound: int) -> list[BasisToken]:
        return [self.token(n) for n in range(bound + 1)]

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.lam.parameters

    def specialize(self, assignments: dict) -> "OmegaModule":
        return OmegaModule(self.lam.specialize(assignments))

    def to_json(self) -> dict:
        return {"family": "omega", "lambda": self.lam.render()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OmegaModule) and self.lam == other.lam


# ----------------------------------------------------------------------
# Rational functions with prescribed poles, in the partial-fraction basis

class FractionModule(DModule):
    """Tokens t^i (i >= 0) and (t - beta_j)^{-k} (k >= 1), distinct rational
    poles with beta_0 = 0; d/dt acts covariantly with residues alphas[j].
    """

    family = "fraction"

    def __init__(self,
                 alphas: Iterable[Scalar | int | Fraction | str],
                 betas: Iterable[Fraction | int | str]):
        self.alphas = tuple(
            Scalar.parse(a) if isinstance(a, str) else scalar(a) for a in alphas)
        self.betas = tuple(Fraction(b) for b in betas)
        if len(self.alphas) != len(self.betas):
            raise ValueError("alphas and betas must have equal length")
        if not self.betas or self.betas[0] != 0:
            raise ValueError("the first pole must be 0 (it makes t invertible)")
        if len(set(self.betas)) != len(self.betas):
            raise ValueError(f"poles must be distinct, got {self.betas}")

    def pow_token(self, i: int, bar: bool = False) -> BasisToken:
        if i < 0:
            raise ValueError("use pole_token for negative powers of t")
        return BasisToken("fraction", bar, 0, i, 0)

    def pole_token(self, j: int, k: int, bar: bool = False) -> BasisToken:
        if not 0 <= j < len(self.betas):
            raise ValueError(f"pole index {j} out of range")
        if k < 1:
            raise ValueError(f"pole order must be >= 1, got {k}")
        return BasisToken("fraction", bar, 1, j, k)

    # -- basis products ------------------------------------------------

    def _times_t(self, tok: BasisToken) -> ModuleVector:
        if tok.kind == 0:
            return ModuleVector.single(tok._replace(i=tok.i + 1))
        # t * (t-b)^{-k} = (t-b)^{-(k-1)} + b (t-b)^{-k}
        beta = self.betas[tok.i]
        drop = (ModuleVector.single(tok._replace(kind=0, i=0, k=0))
                if tok.k == 1 else ModuleVector.single(tok._replace(k=tok.k - 1)))
        if beta == 0:
            return drop
        return drop + ModuleVector.single(tok, beta)

    def _times_inv(self, tok: BasisToken, j: int) -> ModuleVector:
        """Multiply one token by (t - beta_j)^{-1}, re-expanded in the basis."""
        beta = self.betas[j]
        if tok.kind == 0:
            # t^i / (t-b) = sum_{r<i} b^{i-1-r} t^r + b^i (t-b)^{-1}
            i = tok.i
            if i == 0:
                return ModuleVector.single(tok._replace(kind=1, i=j, k=1))
            terms: dict[BasisToken, Scalar] = {}
            for r in range(i):
                c = beta ** (i - 1 - r)
                if c:
                    terms[tok._replace(i=r)] = scalar(c)
            tail = beta ** i
            if tail:
                terms[tok._replace(kind=1, i=j, k=1)] = scalar(tail)
            return ModuleVector(terms)
        if tok.i == j:
            return ModuleVector.single(tok._replace(k=tok.k + 1))
        # (t-b')^{-k} (t-b)^{-1} = ((t-b')^{-k} - (t-b')^{-(k-1)}(t-b)^{-1})/(b'-b)
        c = scalar(Fraction(1, 1) / (self.betas[tok.i] - beta))
        head = ModuleVector.single(tok, c)
        if tok.k == 1:
            return head - ModuleVector.single(tok._replace(i=j), c)
        return head - self._times_inv(tok._replace(k=tok.k - 1), j).scale(c)

    def _ddt(self, vec: ModuleVector) -> ModuleVector:
        """The covariant derivative  f -> f' + f sum_j alphas[j]/(t-beta_j)."""
        out = ModuleVector.zero()
        for tok, coeff in vec.items():
            if tok.kind == 0:
                if tok.i:
                    out = out + ModuleVector.single(
                        tok._replace(i=tok.i - 1), coeff * tok.i)
            else:
                out = out + ModuleVector.single(
                    tok._replace(k=tok.k + 1), coeff * (-tok.k))
            for j, alpha in enumerate(self.alphas):
                out = out + self._times_inv(tok, j).scale(coeff * alpha)
        return out

    # -- the uniform interface ------------------------------------------

    def act_t(self, m: int, vec: ModuleVector) -> ModuleVector:
        step = self._times_t if m >= 0 else (lambda tok: self._times_inv(tok, 0))
        for _ in range(abs(m)):
            out = ModuleVector.zero()
            for tok, coeff in vec.items():
                out = out + step(tok).scale(coeff)
            vec = out
        return vec

    def act_D(self, vec: ModuleVector) -> ModuleVector:
        return self.act_t(1, self._ddt(vec))

    def tokens(self, bound: int) -> list[BasisToken]:
        out = [self.pow_token(i) for i in range(bound + 1)]
        for j in range(len(self.betas)):
            out.extend(self.pole_token(j, k) for k in range(1, bound + 1))
        return sorted(out)

    @property
    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        for a in self.alphas:
            names.update(a.parameters)
        return tuple(sorted(names))

    def specialize(self, assignments: dict) -> "FractionModule":
        return FractionModule(
            [a.specialize(assignments) for a in self.alphas], self.betas)

    def to_json(self) -> dict:
        return {
            "family": "fraction",
            "alphas": [a.render() for a in self.alphas],
            "betas": [str(b) for b in self.betas],
        }

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FractionModule)
                and self.alphas == other.alphas and self.betas == other.betas)


# ----------------------------------------------------------------------
# The degree-n family: d^n collapses to multiplication by t

class DegreeModule(DModule):
    """Tokens t^i d^m (i in Z, 0 <= m < n) with d = d/dt and d^n = t."""

    family = "degree"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"degree must be >= 1, got {n}")
        self.n = n

    def token(self, i: int, m: int, bar: bool = False) -> BasisToken:
        if not 0 <= m < self.n:
            raise ValueError(f"d-power must lie in [0, {self.n - 1}], got {m}")
        return BasisToken("degree", bar, 0, i, m)

    def _t_token(self, m: int, tok: BasisToken) -> ModuleVector:
        return ModuleVector.single(tok._replace(i=tok.i + m))

    def _ddt(self, vec: ModuleVector) -> ModuleVector:
        out = ModuleVector.zero()
        for tok, coeff in vec.items():
            if tok.i:
                out = out + ModuleVector.single(
                    tok._replace(i=tok.i - 1), coeff * tok.i)
            if tok.k + 1 < self.n:
                out = out + ModuleVector.single(tok._replace(k=tok.k + 1), coeff)
            else:
                out = out + ModuleVector.single(
                    tok._replace(i=tok.i + 1, k=0), coeff)
        return out

    def _d_token(self, tok: BasisToken) -> ModuleVector:
        return self.act_t(1, self._ddt(ModuleVector.single(tok)))

    def tokens(self, bound: int) -> list[BasisToken]:
        return [self.token(i, m)
                for i in range(-bound, bound + 1) for m in range(self.n)]

    def to_json(self) -> dict:
        return {"family": "degree", "n": self.n}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DegreeModule) and self.n == other.n


# ----------------------------------------------------------------------
# Serialization and text forms

def spec_from_json(data: dict | str) -> DModule:
    """Build a module from its JSON description (dict or JSON text)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValueError(f"module spec is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValueError("module spec must be a JSON object")
    family = data.get("family")
    try:
        if family == "laurent":
            return LaurentModule(data["alpha"])
        if family == "omega":
            return OmegaModule(data["lambda"])
        if family == "fraction":
            return FractionModule(data["alphas"], data["betas"])
        if family == "degree":
            return DegreeModule(int(data["n"]))
    except KeyError as exc:
        raise ValueError(f"module spec is missing the {exc.args[0]!r} field") from None
    raise ValueError(f"unknown module family: {family!r}")


def _beta_text(beta: Fraction) -> str:
    return f"t-{beta}" if beta > 0 else f"t+{-beta}"


def render_token(spec: DModule, tok: BasisToken) -> str:
    if tok.family != spec.family:
        raise ValueError(f"token family {tok.family!r} does not match {spec.family!r}")
    bar = "~" if tok.bar else ""
    if tok.family == "laurent" or (tok.family == "fraction" and tok.kind == 0):
        return f"t^{tok.i}{bar}"
    if tok.family == "omega":
        return f"D^{tok.i}{bar}"
    if tok.family == "fraction":
        beta = spec.betas[tok.i]
        if beta == 0:
            return f"t^-{tok.k}{bar}"
        return f"({_beta_text(beta)})^-{tok.k}{bar}"
    return f"t^{tok.i}*d^{tok.k}{bar}"


_TOKEN_RES = {
    "laurent": re.compile(r"t\^(?P<i>-?\d+)(?P<bar>~)?"),
    "omega": re.compile(r"D\^(?P<i>\d+)(?P<bar>~)?"),
    "fraction": re.compile(
        r"(?:t\^(?P<i>\d+)"
        r"|t\^-(?P<k0>\d+)"
        r"|\(t(?P<sign>[+-])(?P<beta>\d+(?:/\d+)?)\)\^-(?P<k>\d+))(?P<bar>~)?"),
    "degree": re.compile(r"t\^(?P<i>-?\d+)\*d\^(?P<m>\d+)(?P<bar>~)?"),
}


def parse_token(spec: DModule, text: str) -> BasisToken:
    """Parse one token in the family of ``spec`` (bar suffix ``~`` allowed)."""
    match = _TOKEN_RES[spec.family].fullmatch(text.strip())
    if match is None:
        raise ScalarParseError(f"not a {spec.family} token: {text!r}")
    bar = match.group("bar") is not None
    if spec.family == "laurent":
        return spec.token(int(match.group("i")), bar)
    if spec.family == "omega":
        return spec.token(int(match.group("i")), bar)
    if spec.family == "degree":
        return spec.token(int(match.group("i")), int(match.group("m")), bar)
    if match.group("i") is not None:
        return spec.pow_token(int(match.group("i")), bar)
    if match.group("k0") is not None:
        return spec.pole_token(0, int(match.group("k0")), bar)
    beta = Fraction(match.group("beta"))
    if match.group("sign") == "+":
        beta = -beta
    try:
        j = spec.betas.index(beta)
    except ValueError:
        raise ScalarParseError(f"{text!r} names a pole this module lacks") from None
    return spec.pole_token(j, int(match.group("k")), bar)


def render_vector(spec: DModule, vec: ModuleVector) -> str:
    return render_linear(
        [(coeff, render_token(spec, tok)) for tok, coeff in vec.items()])


def _split_terms(text: str) -> Iterator[tuple[int, str]]:
    """Yield (sign, term) splitting on top-level ' + ' / ' - ' separators."""
    depth = 0
    sign, start = 1, 0
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch == " " and text[pos:pos + 3] in (" + ", " - "):
            yield sign, text[start:pos]
            sign = 1 if text[pos + 1] == "+" else -1
            start = pos + 3
            pos += 2
        pos += 1
    yield sign, text[start:]


def parse_vector(spec: DModule, text: str) -> ModuleVector:
    """Parse a linear combination of tokens, e.g. ``"t^0 - (a + 1)*t^2~"``."""
    text = text.strip()
    if text in ("", "0"):
        return ModuleVector.zero()
    lead = 1
    if text.startswith("-"):
        lead, text = -1, text[1:].lstrip()
    token_re = _TOKEN_RES[spec.family]
    term_re = re.compile(
        rf"(?:(?P<coef>.+)\*)?(?P<tok>{token_re.pattern})")
    out = ModuleVector.zero()
    for sign, term in _split_terms(text):
        match = term_re.fullmatch(term.strip())
        if match is None:
            raise ScalarParseError(f"not a {spec.family} vector term: {term!r}")
        coeff = scalar(lead * sign)
        if match.group("coef") is not None:
            coeff = coeff * Scalar.parse(match.group("coef"))
        out = out + ModuleVector.single(parse_token(spec, match.group("tok")), coeff)
        lead = 1
    return out
