"""Finite-window verification of the constructed modules.

Everything here is exact and desk-scale: modules are truncated to a token
window, generator applications that leave the window are projected away
(and counted), and ranks come from exact elimination over the rational
or rational-function coefficients.  A full-rank probe is therefore
*evidence* for irreducibility, never proof; a rank gap, on the other hand,
is an honest certificate that the seed fails to generate within the window.

The operator identities checked here are the two enveloping-algebra
tricks that drive the degeneration analysis:

    T_{k,d} = (1/4d^2) (L_{-d} G+_{k+d} + L_d G+_{k-d} - 2 L_0 G+_k)
    Q_{m,d} = (2/d^2)  (L_{-d} L_{m+d} + L_d L_{m-d} - 2 L_0 L_m)

On every constructed module, (1/(b(1-2b))) T_{k,d} v = the barred copy of
t^k v for unbarred v, provided the normalizer b(1-2b) is invertible; and
at b = 0, Q_{m,d} w-bar = the barred copy of t^m w.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .dmodules import BasisToken, LaurentModule, ModuleVector, render_token, render_vector
from .functors import GModuleHandle, g_act
from .liealg import Generator, LieVector, algebra_generators, bracket, parity, render_generator
from .morphisms import VerificationReport
from .scalars import Scalar, ScalarError, scalar

__all__ = [
    "Window",
    "ReachReport",
    "SingularNormalizerError",
    "t_operator_check",
    "q_operator_check",
    "span_probe",
    "submodule_check",
    "iso_witness_check",
    "module_axiom_check",
    "phi_witness",
    "psi_witness",
    "identity_witness",
    "probe_seed",
]


class SingularNormalizerError(ScalarError, ZeroDivisionError):
    """The normalizer b(1-2b) vanished, so the T-identity cannot be scaled."""


@dataclass(frozen=True)
class Window:
    """Truncation bounds: generator indices, token indices, word length."""

    gen_bound: int
    token_bound: int
    word_length: int = 1

    def __post_init__(self):
        if min(self.gen_bound, self.token_bound, self.word_length) < 1:
            raise ValueError("window bounds must all be >= 1")

    def to_json(self) -> dict:
        return {"genBound": self.gen_bound, "tokenBound": self.token_bound,
                "wordLength": self.word_length}


@dataclass
class ReachReport:
    """What a seed generates inside a window, measured exactly."""

    seed: str
    window: Window
    rank: int
    ambient: int
    missing: list[str]
    specialization: dict[str, str] | str
    projected: int
    cross_check_rank: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def full(self) -> bool:
        return self.rank == self.ambient

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "kind": "span-probe",
            "seed": self.seed,
            "window": self.window.to_json(),
            "rank": self.rank,
            "ambient": self.ambient,
            "full": self.full,
            "missing": self.missing,
            "projectedTerms": self.projected,
            "specialization": self.specialization,
            "crossCheckRank": self.cross_check_rank,
            "notes": self.notes,
        }


def probe_seed() -> int:
    """The seed for randomized cross-checks (env SUPERMOD_SEED, default 0)."""
    return int(os.environ.get("SUPERMOD_SEED", "0"))


# ----------------------------------------------------------------------
# exact elimination over the coefficient field

class _RowSpan:
    """A row-reduced span of vectors over a fixed, ordered token list.

    Pivot rows are normalized to a unit pivot once, so insertion and
    membership need one division per new pivot and multiply-subtract
    elsewhere; coefficients stay lazy fractions throughout.
    """

    def __init__(self, tokens: list[BasisToken]):
        self.index = {tok: i for i, tok in enumerate(tokens)}
        self.pivots: dict[int, dict[int, Scalar]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: dict[int, Scalar]) -> dict[int, Scalar]:
        while row:
            lead = min(row)
            pivot = self.pivots.get(lead)
            if pivot is None:
                return row
            factor = row.pop(lead)
            for j, c in pivot.items():
                if j == lead:
                    continue
                acc = row.get(j)
                term = c * factor
                val = -term if acc is None else acc - term
                if val.is_zero:
                    row.pop(j, None)
                else:
                    row[j] = val
        return row

    def _to_row(self, vec: ModuleVector) -> dict[int, Scalar]:
        row = {}
        for tok, coeff in vec.items():
            idx = self.index.get(tok)
            if idx is None:
                raise KeyError(f"token outside the window: {tok}")
            row[idx] = coeff
        return row

    def insert(self, vec: ModuleVector) -> bool:
        """Add a vector to the span; True when the rank grew."""
        row = self._reduce(self._to_row(vec))
        if not row:
            return False
        lead = min(row)
        inv = row[lead] ** -1
        self.pivots[lead] = {j: c * inv for j, c in row.items()}
        return True

    def contains(self, vec: ModuleVector) -> bool:
        return not self._reduce(self._to_row(vec))


def _project(vec: ModuleVector, allowed: set[BasisToken]) -> tuple[ModuleVector, int]:
    """Drop tokens outside the window, returning the dropped-term count."""
    dropped = [tok for tok, _ in vec.items() if tok not in allowed]
    if not dropped:
        return vec, 0
    out = vec
    for tok in dropped:
        out = out - ModuleVector.single(tok, out.coefficient(tok))
    return out, len(dropped)


def _specialize_vector(vec: ModuleVector, assignments: dict) -> ModuleVector:
    if not assignments:
        return vec
    return ModuleVector(
        {tok: coeff.specialize(assignments) for tok, coeff in vec.items()})


def _window_generators(sector: int, bound: int) -> list[tuple[Generator, LieVector]]:
    gens = algebra_generators(sector, bound, include_central=False)
    return [(g, LieVector.basis(g, sector)) for g in gens]


# ----------------------------------------------------------------------
# the T and Q operator identities

def _apply_word(handle: GModuleHandle, word: list[Generator],
                v: ModuleVector) -> ModuleVector:
    for g in reversed(word):
        v = g_act(handle, LieVector.basis(g, handle.sector), v)
    return v


def t_operator_check(handle: GModuleHandle, k: int, d: int,
                     v: ModuleVector) -> VerificationReport:
    """Check (1/(b(1-2b))) T_{k,d} v = theta t^k v for unbarred v."""
    if d == 0:
        raise ValueError("d must be nonzero")
    if handle.sector != 0:
        raise ValueError("the T identity lives in sector 0")
    if v.is_zero or any(tok.bar for tok, _ in v.items()):
        raise ValueError("v must be nonzero with unbarred support")
    normalizer = handle.b * (1 - 2 * handle.b)
    if normalizer.is_zero:
        raise SingularNormalizerError(
            f"b(1-2b) = 0 at b = {handle.b.render()}; the T identity degenerates")
    L, Gp = (lambda m: Generator("L", 2 * m)), (lambda m: Generator("G+", 2 * m))
    total = (_apply_word(handle, [L(-d), Gp(k + d)], v)
             + _apply_word(handle, [L(d), Gp(k - d)], v)
             - _apply_word(handle, [L(0), Gp(k)], v).scale(2))
    lhs = total.scale(scalar(Fraction(1, 4 * d * d)) / normalizer)
    rhs = handle.reduce(
        handle.module.act_t(k, v).map_tokens(lambda tok: tok.barred()))
    passed = lhs == rhs
    violations = []
    if not passed:
        violations.append({"k": k, "d": d, "difference": str(lhs - rhs)})
    return VerificationReport(
        kind="t-operator", passed=passed, checked=1, violations=violations,
        details={"k": k, "d": d, "b": handle.b.render()})


def q_operator_check(handle: GModuleHandle, m: int, d: int,
                     wbar: ModuleVector) -> VerificationReport:
    """Check Q_{m,d} w-bar = the barred copy of t^m w, at b = 0."""
    if d == 0:
        raise ValueError("d must be nonzero")
    if handle.sector != 0:
        raise ValueError("the Q identity lives in sector 0")
    if handle.b != scalar(0):
        raise ValueError(f"the Q identity needs b = 0, got b = {handle.b.render()}")
    if wbar.is_zero or any(not tok.bar for tok, _ in wbar.items()):
        raise ValueError("the argument must be nonzero with barred support")
    L = lambda n: Generator("L", 2 * n)
    total = (_apply_word(handle, [L(-d), L(m + d)], wbar)
             + _apply_word(handle, [L(d), L(m - d)], wbar)
             - _apply_word(handle, [L(0), L(m)], wbar).scale(2))
    lhs = total.scale(Fraction(2, d * d))
    w = wbar.map_tokens(lambda tok: tok.unbarred())
    rhs = handle.reduce(
        handle.module.act_t(m, w).map_tokens(lambda tok: tok.barred()))
    passed = lhs == rhs
    violations = []
    if not passed:
        violations.append({"m": m, "d": d, "difference": str(lhs - rhs)})
    return VerificationReport(
        kind="q-operator", passed=passed, checked=1, violations=violations,
        details={"m": m, "d": d})


# ----------------------------------------------------------------------
# span probes

def span_probe(handle: GModuleHandle, seed: ModuleVector, window: Window,
               specialization: dict | None = None,
               cross_check: bool = True) -> ReachReport:
    """Close a seed under window generator applications and measure rank.

    The closure repeats until the span stabilizes inside the token window
    (or fills it); the window's word length is echoed in the report as the
    requested depth.  ``specialization`` is a parameter assignment applied
    first (None keeps every parameter symbolic).  When parameters remain,
    the symbolic rank is cross-checked at seeded random rationals and the
    result recorded.
    """
    assignments = dict(specialization or {})
    handle = handle.specialize(assignments)
    seed = handle.reduce(_specialize_vector(seed, assignments))
    if seed.is_zero:
        raise ValueError("the seed must be nonzero (after any specialization)")
    tokens = handle.tokens(window.token_bound)
    allowed = set(tokens)
    span = _RowSpan(tokens)
    gens = _window_generators(handle.sector, window.gen_bound)
    projected = 0
    start, dropped = _project(seed, allowed)
    projected += dropped
    frontier = [start] if span.insert(start) else []
    while frontier and span.rank < len(tokens):
        new_frontier = []
        for vec in frontier:
            for _, gvec in gens:
                image, dropped = _project(g_act(handle, gvec, vec), allowed)
                projected += dropped
                if not image.is_zero and span.insert(image):
                    new_frontier.append(image)
        frontier = new_frontier
    pivot_tokens = {tokens[i] for i in span.pivots}
    missing = [render_token(handle.module, tok)
               for tok in tokens if tok not in pivot_tokens]
    spec_used: dict[str, str] | str = (
        {name: str(Fraction(val)) for name, val in sorted(assignments.items())}
        if assignments else "symbolic")
    report = ReachReport(
        seed=_vector_text(handle, seed), window=window, rank=span.rank,
        ambient=len(tokens), missing=missing, specialization=spec_used,
        projected=projected)
    remaining = handle.parameters()
    if cross_check and remaining:
        rng = random.Random(probe_seed())
        draw = {name: Fraction(rng.randint(1, 30), 31) for name in remaining}
        cross = span_probe(handle, seed, window, draw, cross_check=False)
        report.cross_check_rank = cross.rank
        report.notes.append(
            "cross-checked at " + ", ".join(
                f"{n}={v}" for n, v in sorted(draw.items())))
        if cross.rank > report.rank:
            report.notes.append(
                "cross-check exceeded the symbolic rank; elimination bug")
    return report


def _vector_text(handle: GModuleHandle, vec: ModuleVector) -> str:
    return render_vector(handle.module, vec)


# ----------------------------------------------------------------------
# submodule and isomorphism-witness checks

def submodule_check(handle: GModuleHandle, subspace: list[ModuleVector],
                    window: Window) -> VerificationReport:
    """Is the span of the given vectors invariant inside the window?

    Images are projected to the token window before the membership test,
    matching the probe semantics: closure is asserted modulo truncation.
    """
    if not subspace:
        raise ValueError("the subspace needs at least one generator")
    tokens = handle.tokens(window.token_bound)
    allowed = set(tokens)
    span = _RowSpan(tokens)
    for vec in subspace:
        if vec.is_zero:
            raise ValueError("subspace generators must be nonzero")
        span.insert(_project(vec, allowed)[0])
    gens = _window_generators(handle.sector, window.gen_bound)
    checked = 0
    violations = []
    for vec in subspace:
        for g, gvec in gens:
            image, _ = _project(g_act(handle, gvec, vec), allowed)
            checked += 1
            if not span.contains(image):
                violations.append({
                    "generator": render_generator(g),
                    "vector": _vector_text(handle, vec),
                    "escapes": _vector_text(handle, image),
                })
    return VerificationReport(
        kind="submodule", passed=not violations, checked=checked,
        violations=violations,
        details={"window": window.to_json(), "subspaceRank": span.rank})


def iso_witness_check(source: GModuleHandle, target: GModuleHandle,
                      mapping: dict[BasisToken, ModuleVector],
                      window: Window) -> VerificationReport:
    """Does a token-correspondence rule intertwine the two actions?

    The rule must cover every token the source action reaches from the
    window tokens of its domain; uncovered tokens are reported as
    violations, never guessed.  The rule is also required to be injective
    on the window (its images must be linearly independent).
    """

    def image(vec: ModuleVector) -> tuple[ModuleVector | None, BasisToken | None]:
        out = ModuleVector.zero()
        for tok, coeff in vec.items():
            piece = mapping.get(tok)
            if piece is None:
                return None, tok
            out = out + piece.scale(coeff)
        return out, None

    window_tokens = set(source.tokens(window.token_bound))
    domain = [tok for tok in mapping if tok in window_tokens]
    gens = _window_generators(source.sector, window.gen_bound)
    checked = 0
    violations = []
    parity_ok = True
    for tok in sorted(domain):
        v = ModuleVector.single(tok)
        mapped, _ = image(v)
        for img_tok, _ in mapped.items():
            if target.token_parity(img_tok) != source.token_parity(tok):
                parity_ok = False
        for g, gvec in gens:
            checked += 1
            lhs, missing_tok = image(g_act(source, gvec, v))
            if lhs is None:
                violations.append({
                    "generator": render_generator(g),
                    "token": render_token(source.module, tok),
                    "undefinedOn": render_token(source.module, missing_tok),
                })
                continue
            rhs = g_act(target, gvec, mapped)
            if lhs != rhs:
                violations.append({
                    "generator": render_generator(g),
                    "token": render_token(source.module, tok),
                    "difference": _vector_text(target, lhs - rhs),
                })
    image_tokens = sorted({tok for src in domain for tok, _ in mapping[src].items()})
    img_span = _RowSpan(image_tokens)
    injective = all(img_span.insert(mapping[tok]) for tok in sorted(domain))
    if not injective:
        violations.append({"injectivity": "images are linearly dependent"})
    report = VerificationReport(
        kind="iso-witness", passed=not violations, checked=checked,
        violations=violations,
        details={"window": window.to_json(), "domainSize": len(domain),
                 "parityPreserving": parity_ok})
    if not parity_ok:
        report.notes.append(
            "the rule flips parity; source and target match only as "
            "ungraded modules")
    return report


# ----------------------------------------------------------------------
# witness constructors for the degenerate-b comparisons

def _laurent_witness(alpha, token_bound: int, margin: int, quotient: bool):
    """The shared shape of the two degeneration witnesses.

    Source: the invariant part of the b = 1/2 module (unbarred tokens, and
    the barred tokens that D reaches).  Target: the sigma-twist of the b=0
    module, parity-flipped -- or its quotient by the killed token when
    ``quotient`` (which forces integer alpha and drops the unreachable
    barred index).  Rule: t^n -> bar(t^n) and bar(t^n) -> t^n / (alpha+n).
    """
    alpha = scalar(alpha)
    source = GModuleHandle(LaurentModule(alpha), scalar(Fraction(1, 2)))
    target = GModuleHandle(LaurentModule(alpha), 0, pi=not quotient,
                           sigma=True, quotient=quotient)
    mapping: dict[BasisToken, ModuleVector] = {}
    for n in range(-(token_bound + margin), token_bound + margin + 1):
        mod = source.module
        mapping[mod.token(n)] = ModuleVector.single(mod.token(n, bar=True))
        weight = alpha + n
        if not weight.is_zero:
            mapping[mod.token(n, bar=True)] = ModuleVector.single(
                mod.token(n), weight ** -1)
    return source, target, mapping


def phi_witness(alpha, token_bound: int, margin: int | None = None):
    """Source, target and rule for the b = 1/2 comparison at generic alpha."""
    return _laurent_witness(alpha, token_bound, margin or token_bound, quotient=False)


def psi_witness(token_bound: int, margin: int | None = None):
    """Source, target and rule for the integer-weight (alpha = 0) comparison."""
    return _laurent_witness(0, token_bound, margin or token_bound, quotient=True)


def identity_witness(handle: GModuleHandle, token_bound: int,
                     margin: int | None = None):
    mapping = {tok: ModuleVector.single(tok)
               for tok in handle.tokens(token_bound + (margin or token_bound))}
    return handle, handle, mapping


# ----------------------------------------------------------------------
# the module-axiom suite

def module_axiom_check(handle: GModuleHandle, window: Window) -> VerificationReport:
    """g_act([x,y]) = g_act(x) g_act(y) -+ g_act(y) g_act(x), exhaustively.

    All homogeneous generator pairs with indices inside the window act on
    every window token; nothing is projected, so the identities checked
    are exact in all module parameters and b.
    """
    sector = handle.sector
    gens = algebra_generators(sector, window.gen_bound, include_central=True)
    tokens = handle.tokens(window.token_bound)

    # every single-token application is computed once; both sides of the
    # axiom are then linear combinations of memoized vectors
    memo: dict[tuple[Generator, BasisToken], ModuleVector] = {}

    def act(gen: Generator, vec: ModuleVector) -> ModuleVector:
        out = ModuleVector.zero()
        for tok, coeff in vec.items():
            image = memo.get((gen, tok))
            if image is None:
                image = g_act(handle, LieVector.basis(gen, sector),
                              ModuleVector.single(tok))
                memo[gen, tok] = image
            out = out + image.scale(coeff)
        return out

    def act_vector(gv: LieVector, vec: ModuleVector) -> ModuleVector:
        out = ModuleVector.zero()
        for gen, coeff in gv.items():
            if gen.kind != "C":
                out = out + act(gen, vec).scale(coeff)
        return out

    checked = 0
    violations = []
    for i, x in enumerate(gens):
        xv = LieVector.basis(x, sector)
        for y in gens[i:]:
            yv = LieVector.basis(y, sector)
            br = bracket(xv, yv)
            sign = (-1) ** (parity(x.kind) * parity(y.kind))
            for tok in tokens:
                v = ModuleVector.single(tok)
                lhs = act_vector(br, v)
                rhs = act_vector(xv, act_vector(yv, v)) \
                    - act_vector(yv, act_vector(xv, v)).scale(sign)
                checked += 1
                if lhs != rhs:
                    violations.append({
                        "pair": [render_generator(x), render_generator(y)],
                        "token": render_token(handle.module, tok),
                        "difference": _vector_text(handle, lhs - rhs),
                    })
    return VerificationReport(
        kind="module-axiom", passed=not violations, checked=checked,
        violations=violations,
        details={"window": window.to_json(), "sector": sector,
                 "tags": list(handle.tags)})
