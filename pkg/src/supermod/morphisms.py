"""Structure maps between the algebras, and homomorphism verification.

Four maps are implemented:

``delta``
    The spectral shift identifying the two sectors.  From sector 1/2 to
    sector 0 it sends L_m -> L_m + H_m/2 + delta_{m,0} C/24,
    H_m -> H_m + delta_{m,0} C/6, G+-_p -> G+-_{p +- 1/2}, C -> C; the
    inverse direction flips the signs of the H_m/2 and C/6 corrections and
    the index shifts.

``varpi``
    The realization of the centerless sector-0 algebra inside the Weyl
    superalgebra:  L_m -> -t^m (D + (m/2) theta dtheta),  H_m -> t^m theta
    dtheta,  G+_m -> -2 t^m theta D,  G-_m -> t^m dtheta,  C -> 0.

``sigma-b``
    The b-deformed realization on the extended algebra (centerless algebra
    semidirect the Laurent superfunctions, which act by multiplication):
    sigma_b agrees with varpi up to multiplication operators,
    sigma_b(L_m) = varpi(L_m) - m b t^m,  sigma_b(H_m) = varpi(H_m) - 2b t^m,
    sigma_b(G+_m) = varpi(G+_m) - 4bm t^m theta,  sigma_b(G-_m) = varpi(G-_m),
    and sigma_b is the identity on the multiplication operators themselves.

``sigma-aut``
    The order-2 automorphism fixing every L_m:  H -> -H,  G+ -> -2 G-,
    G- -> -G+/2,  C -> C.

:func:`hom_check` verifies each map against the supercommutator on every
generator pair in an index window and returns a :class:`VerificationReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .liealg import (
    Generator,
    LieVector,
    algebra_generators,
    bracket,
    parity,
    render_generator,
    render_sector,
)
from .scalars import Scalar, scalar
from .weyl import CF_DTHETA, CF_N, CF_ONE, CF_THETA, SDElement, SuperLaurent

__all__ = [
    "VerificationReport",
    "apply_delta",
    "apply_varpi",
    "apply_sigma_b",
    "apply_sigma_aut",
    "hom_check",
    "HOM_CHECK_KINDS",
]


@dataclass
class VerificationReport:
    """Outcome of an exhaustive identity check over a finite window."""

    kind: str
    passed: bool
    checked: int
    violations: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    #: maximum number of violations listed in JSON output
    MAX_LISTED = 25

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "kind": self.kind,
            "passed": self.passed,
            "checked": self.checked,
            "violationCount": len(self.violations),
            "violations": self.violations[: self.MAX_LISTED],
            "details": self.details,
            "notes": self.notes,
        }


# ----------------------------------------------------------------------
# delta: the spectral shift between sectors

_C = Generator("C", 0)


def apply_delta(x: LieVector, direction: str | None = None) -> LieVector:
    """Apply the spectral shift, or its inverse, to a vector.

    ``direction`` is "half-to-zero" or "zero-to-half"; when omitted it is
    inferred from the sector of ``x``.
    """
    inferred = "half-to-zero" if x.sector == 1 else "zero-to-half"
    if direction is None:
        direction = inferred
    elif direction not in ("half-to-zero", "zero-to-half"):
        raise ValueError(f"unknown direction {direction!r}")
    elif direction != inferred:
        raise ValueError(
            f"direction {direction} does not match a sector-"
            f"{render_sector(x.sector)} argument")
    sign = 1 if direction == "half-to-zero" else -1
    target = 0 if direction == "half-to-zero" else 1
    acc: dict[Generator, Scalar] = {}

    def add(gen: Generator, coeff) -> None:
        if gen in acc:
            acc[gen] = acc[gen] + coeff
        else:
            acc[gen] = scalar(0) + coeff

    for gen, c in x.items():
        if gen.kind == "L":
            add(Generator("L", gen.index2), c)
            add(Generator("H", gen.index2), c * Fraction(sign, 2))
            if gen.index2 == 0:
                add(_C, c * Fraction(1, 24))
        elif gen.kind == "H":
            add(Generator("H", gen.index2), c)
            if gen.index2 == 0:
                add(_C, c * Fraction(sign, 6))
        elif gen.kind == "G+":
            add(Generator("G+", gen.index2 + sign), c)
        elif gen.kind == "G-":
            add(Generator("G-", gen.index2 - sign), c)
        else:
            add(_C, c)
    return LieVector(target, acc)


# ----------------------------------------------------------------------
# varpi and sigma_b: realizations by differential operators


def apply_varpi(x: LieVector) -> SDElement:
    """The Weyl-superalgebra realization of the centerless sector-0 algebra."""
    if x.sector != 0:
        raise ValueError("varpi is defined on sector 0; shift sectors first")
    acc = SDElement.zero()
    for gen, c in x.items():
        m = gen.index2 // 2
        if gen.kind == "L":
            acc = acc + SDElement.word(m, 1, CF_ONE, -c)
            if m:
                acc = acc + SDElement.word(m, 0, CF_N, c * Fraction(-m, 2))
        elif gen.kind == "H":
            acc = acc + SDElement.word(m, 0, CF_N, c)
        elif gen.kind == "G+":
            acc = acc + SDElement.word(m, 1, CF_THETA, c * (-2))
        elif gen.kind == "G-":
            acc = acc + SDElement.word(m, 0, CF_DTHETA, c)
        # C maps to zero: the realization factors through the quotient
    return acc


def apply_sigma_b(x: LieVector | SuperLaurent, b: Scalar) -> SDElement:
    """The b-deformed realization on the extended algebra.

    Accepts either a Lie vector (sector 0) or a Laurent superfunction, the
    latter going to the corresponding multiplication operator.
    """
    if isinstance(x, SuperLaurent):
        acc = SDElement.zero()
        for (n, th), c in x.items():
            acc = acc + SDElement.word(n, 0, CF_THETA if th else CF_ONE, c)
        return acc
    acc = apply_varpi(x)
    for gen, c in x.items():
        m = gen.index2 // 2
        if gen.kind == "L" and m:
            acc = acc + SDElement.word(m, 0, CF_ONE, c * b * (-m))
        elif gen.kind == "H":
            acc = acc + SDElement.word(m, 0, CF_ONE, c * b * (-2))
        elif gen.kind == "G+" and m:
            acc = acc + SDElement.word(m, 0, CF_THETA, c * b * (-4 * m))
    return acc


def apply_sigma_aut(x: LieVector) -> LieVector:
    """The order-2 automorphism fixing L: H -> -H, G+ -> -2G-, G- -> -G+/2."""
    acc: dict[Generator, Scalar] = {}
    for gen, c in x.items():
        if gen.kind == "H":
            image = [(Generator("H", gen.index2), -c)]
        elif gen.kind == "G+":
            image = [(Generator("G-", gen.index2), c * (-2))]
        elif gen.kind == "G-":
            image = [(Generator("G+", gen.index2), c * Fraction(-1, 2))]
        else:
            image = [(gen, c)]
        for g, value in image:
            if g in acc:
                acc[g] = acc[g] + value
            else:
                acc[g] = value
    return LieVector(x.sector, acc)


# ----------------------------------------------------------------------
# homomorphism checks

HOM_CHECK_KINDS = ("delta", "delta-roundtrip", "varpi", "sigma-b", "sigma-aut")


def hom_check(which: str, window: int, b: Scalar | None = None) -> VerificationReport:
    """Verify one of the structure maps on all generator pairs in a window.

    For "delta" the bracket compatibility is checked from sector 1/2 into
    sector 0; "delta-roundtrip" checks both composites of the shift and its
    inverse against the identity; "varpi" and "sigma-b" compare Lie brackets
    with Weyl-superalgebra supercommutators (for "sigma-b" the pairs range
    over the extended algebra, so multiplication operators are covered);
    "sigma-aut" checks bracket compatibility and the order-2 property in
    both sectors.  ``b`` defaults to the symbolic parameter b.
    """
    if which == "delta":
        return _check_delta(window)
    if which == "delta-roundtrip":
        return _check_delta_roundtrip(window)
    if which == "varpi":
        return _check_varpi(window)
    if which == "sigma-b":
        return _check_sigma_b(window, Scalar.parameter("b") if b is None else b)
    if which == "sigma-aut":
        return _check_sigma_aut(window)
    raise ValueError(f"unknown map {which!r}; expected one of {HOM_CHECK_KINDS}")


def _check_delta(window: int) -> VerificationReport:
    gens = algebra_generators(1, window)
    checked = 0
    violations = []
    for gx in gens:
        x = LieVector.basis(gx, 1)
        dx = apply_delta(x)
        for gy in gens:
            y = LieVector.basis(gy, 1)
            checked += 1
            lhs = bracket(dx, apply_delta(y))
            rhs = apply_delta(bracket(x, y))
            if lhs != rhs:
                violations.append(_pair_violation(gx, gy, lhs, rhs))
    return VerificationReport(
        kind="hom-delta", passed=not violations, checked=checked,
        violations=violations,
        details={"window": window, "from": "1/2", "to": "0"})


def _check_delta_roundtrip(window: int) -> VerificationReport:
    checked = 0
    violations = []
    for sector in (1, 0):
        for gen in algebra_generators(sector, window):
            x = LieVector.basis(gen, sector)
            checked += 1
            back = apply_delta(apply_delta(x))
            if back != x:
                violations.append({
                    "sector": render_sector(sector),
                    "generator": render_generator(gen),
                    "roundtrip": back.render(),
                })
    return VerificationReport(
        kind="hom-delta-roundtrip", passed=not violations, checked=checked,
        violations=violations, details={"window": window})


def _check_varpi(window: int) -> VerificationReport:
    gens = algebra_generators(0, window)
    checked = 0
    violations = []
    images = {g: apply_varpi(LieVector.basis(g, 0)) for g in gens}
    for gx in gens:
        for gy in gens:
            checked += 1
            if gx.kind == "C" or gy.kind == "C":
                lhs = SDElement.zero()
            else:
                lhs = images[gx].supercommutator(images[gy])
            rhs = apply_varpi(bracket(LieVector.basis(gx, 0),
                                      LieVector.basis(gy, 0)))
            if lhs != rhs:
                violations.append(_pair_violation(gx, gy, lhs, rhs))
    return VerificationReport(
        kind="hom-varpi", passed=not violations, checked=checked,
        violations=violations, details={"window": window, "sector": "0"})


def _check_sigma_b(window: int, b: Scalar) -> VerificationReport:
    gens = algebra_generators(0, window)
    fns = []
    for k in range(-window, window + 1):
        fns.append(SuperLaurent.monomial(k, 0))
        fns.append(SuperLaurent.monomial(k, 1))
    checked = 0
    violations = []
    lie_images = {g: apply_sigma_b(LieVector.basis(g, 0), b) for g in gens}

    def describe(u) -> str:
        return render_generator(u) if isinstance(u, Generator) else str(u)

    for gx in gens:
        x = LieVector.basis(gx, 0)
        px = parity(gx.kind)
        # Lie/Lie pairs
        for gy in gens:
            checked += 1
            if gx.kind == "C" or gy.kind == "C":
                lhs = SDElement.zero()
            else:
                lhs = lie_images[gx].supercommutator(lie_images[gy])
            rhs = apply_sigma_b(bracket(x, LieVector.basis(gy, 0)), b)
            if lhs != rhs:
                violations.append(_pair_violation(gx, gy, lhs, rhs))
        # Lie/function pairs, both orders
        for f in fns:
            checked += 2
            pf = f.parity()
            action = apply_varpi(x).apply(f)  # the semidirect-product bracket
            if gx.kind == "C":
                lhs = SDElement.zero()
            else:
                lhs = lie_images[gx].supercommutator(apply_sigma_b(f, b))
            rhs = apply_sigma_b(action, b)
            if lhs != rhs:
                violations.append({
                    "x": describe(gx), "y": str(f),
                    "lhs": str(lhs), "rhs": str(rhs)})
            # [f, x] = -(-1)^{|f||x|} x.f
            if gx.kind == "C":
                lhs = SDElement.zero()
            else:
                lhs = apply_sigma_b(f, b).supercommutator(lie_images[gx])
            sign = -1 if (px and pf) else 1
            rhs = apply_sigma_b(action, b).scale(-sign)
            if lhs != rhs:
                violations.append({
                    "x": str(f), "y": describe(gx),
                    "lhs": str(lhs), "rhs": str(rhs)})
    # function/function pairs supercommute to zero
    for f in fns:
        for g in fns:
            checked += 1
            lhs = apply_sigma_b(f, b).supercommutator(apply_sigma_b(g, b))
            if not lhs.is_zero:
                violations.append({"x": str(f), "y": str(g), "lhs": str(lhs),
                                   "rhs": "0"})
    return VerificationReport(
        kind="hom-sigma-b", passed=not violations, checked=checked,
        violations=violations,
        details={"window": window, "sector": "0", "b": str(b)})


def _check_sigma_aut(window: int) -> VerificationReport:
    checked = 0
    violations = []
    for sector in (0, 1):
        gens = algebra_generators(sector, window)
        for gx in gens:
            x = LieVector.basis(gx, sector)
            checked += 1
            if apply_sigma_aut(apply_sigma_aut(x)) != x:
                violations.append({
                    "sector": render_sector(sector),
                    "generator": render_generator(gx),
                    "value": apply_sigma_aut(apply_sigma_aut(x)).render(),
                })
            for gy in gens:
                y = LieVector.basis(gy, sector)
                checked += 1
                lhs = bracket(apply_sigma_aut(x), apply_sigma_aut(y))
                rhs = apply_sigma_aut(bracket(x, y))
                if lhs != rhs:
                    violations.append(_pair_violation(gx, gy, lhs, rhs))
    return VerificationReport(
        kind="hom-sigma-aut", passed=not violations, checked=checked,
        violations=violations, details={"window": window, "sectors": ["0", "1/2"]})


def _pair_violation(gx: Generator, gy: Generator, lhs, rhs) -> dict:
    return {
        "x": render_generator(gx),
        "y": render_generator(gy),
        "lhs": str(lhs),
        "rhs": str(rhs),
    }
