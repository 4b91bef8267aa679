"""The su(1,1) structure carried by the ladder operators.

Provides commutator residuals for the closure relations, the quadratic
Casimir in both operator orderings, and the canonical conjugate of the
raising operator realized on radial towers.

A *radial tower* is the span of ``r^(2n) * base`` for a fixed kernel
polynomial ``base`` (annihilated by the raising operator).  On a tower the
diagonal generator acts by scalars, which makes the conjugate-ladder weight
function a plain eigenvalue substitution: the component at level ``n`` is
scaled by ``1 / (m + E + n)`` where ``m`` is the base degree and ``E`` the
ground energy.  That substitution is not assumed correct; the residual
routines re-apply the genuine raising operator to materialized states and
check the canonical commutation relation term by term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable

from .exactcore import Poly, euler_apply
from .operators import (
    ModelParams,
    apply_cartan,
    apply_lowering,
    apply_raising,
    cartan_eigenvalue,
    radius_power,
)


class Gen(Enum):
    """Tags for the algebra generators (and the Euler operator)."""

    RAISING = "raising"
    CARTAN = "cartan"
    LOWERING = "lowering"
    EULER = "euler"


def apply_generator(params: ModelParams, gen: Gen, p: Poly) -> Poly:
    if gen is Gen.RAISING:
        return apply_raising(params, p)
    if gen is Gen.CARTAN:
        return apply_cartan(params, p)
    if gen is Gen.LOWERING:
        return apply_lowering(p)
    return euler_apply(p)


def commutator_residual(
    params: ModelParams,
    a: Gen,
    b: Gen,
    expected: Iterable[tuple[int | Fraction, Gen]],
    p: Poly,
) -> Poly:
    """(A B - B A - expected)(p); the zero polynomial iff the relation holds on p."""
    ab = apply_generator(params, a, apply_generator(params, b, p))
    ba = apply_generator(params, b, apply_generator(params, a, p))
    residual = ab - ba
    for coeff, gen in expected:
        residual = residual - apply_generator(params, gen, p) * Fraction(coeff)
    return residual


#: The closure relations, as (name, A, B, expected-combination) rows:
#: [raising, lowering] = -2 cartan, [cartan, raising] = +raising,
#: [cartan, lowering] = -lowering.
CLOSURE_RELATIONS: tuple[tuple[str, Gen, Gen, tuple[tuple[int, Gen], ...]], ...] = (
    ("[raising,lowering]+2*cartan", Gen.RAISING, Gen.LOWERING, ((-2, Gen.CARTAN),)),
    ("[cartan,raising]-raising", Gen.CARTAN, Gen.RAISING, ((1, Gen.RAISING),)),
    ("[cartan,lowering]+lowering", Gen.CARTAN, Gen.LOWERING, ((-1, Gen.LOWERING),)),
)


def closure_residuals(params: ModelParams, p: Poly) -> dict[str, Poly]:
    """All three closure relations evaluated on ``p``."""
    return {
        name: commutator_residual(params, a, b, expected, p)
        for name, a, b, expected in CLOSURE_RELATIONS
    }


class Ordering(Enum):
    MINUS_PLUS = "minus_plus"   # lowering . raising - cartan(cartan + 1)
    PLUS_MINUS = "plus_minus"   # raising . lowering - cartan(cartan - 1)


def casimir_apply(params: ModelParams, p: Poly, ordering: Ordering = Ordering.MINUS_PLUS) -> Poly:
    """Quadratic Casimir; the two orderings agree identically."""
    if ordering is Ordering.MINUS_PLUS:
        first = apply_lowering(apply_raising(params, p))
        second = apply_cartan(params, apply_cartan(params, p) + p)
    else:
        first = apply_raising(params, apply_lowering(p))
        second = apply_cartan(params, apply_cartan(params, p) - p)
    return first - second


def casimir_scalar(params: ModelParams, m: int) -> Fraction:
    """Casimir eigenvalue on the tower over a degree-m kernel polynomial:
    (m+E)/2 * (1 - (m+E)/2) with E the ground energy."""
    w = Fraction(m + params.ground_energy, 2)
    return w * (1 - w)


def conjugate_shift(params: ModelParams, m: int) -> Fraction:
    """Additive constant in the conjugate-weight ansatz: 1 - (E+m)/2."""
    return 1 - Fraction(params.ground_energy + m, 2)


class SingularRepresentationError(ArithmeticError):
    """A conjugate-weight denominator vanished (non-positive energy sector)."""


@dataclass(frozen=True)
class RadialTower:
    """A state ``sum_n coeffs[n] * r^(2n) * base`` over a fixed kernel base.

    ``base`` must be homogeneous (degree ``m``) and annihilated by the raising
    operator; :func:`kernels.kernel_basis` produces such polynomials, and the
    constructor re-checks both properties.
    """

    params: ModelParams
    m: int
    base: Poly
    coeffs: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.base.is_zero():
            raise ValueError("tower base must be nonzero")
        if not self.base.is_homogeneous() or self.base.degree() != self.m:
            raise ValueError(f"tower base must be homogeneous of degree {self.m}")
        if not apply_raising(self.params, self.base).is_zero():
            raise ValueError("tower base is not annihilated by the raising operator")
        clean = {n: Fraction(c) for n, c in self.coeffs.items() if c}
        if any(n < 0 for n in clean):
            raise ValueError("tower levels must be non-negative")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def single(cls, params: ModelParams, base: Poly, level: int = 0, coeff=1) -> "RadialTower":
        return cls(params, base.degree(), base, {level: Fraction(coeff)})

    def map_coeffs(self, fn: Callable[[int, Fraction], Fraction], shift: int = 0) -> "RadialTower":
        return RadialTower(
            self.params, self.m, self.base,
            {n + shift: fn(n, c) for n, c in self.coeffs.items()},
        )

    def materialize(self) -> Poly:
        """Expand to an explicit polynomial."""
        out = Poly.zero(self.base.num_vars)
        for n in sorted(self.coeffs):
            out = out + radius_power(self.base.num_vars, n) * self.base * self.coeffs[n]
        return out

    @classmethod
    def from_poly(cls, params: ModelParams, base: Poly, p: Poly) -> "RadialTower":
        """Re-extract tower coefficients from an explicit polynomial.

        Each homogeneous component of ``p`` must be an exact scalar multiple
        of ``r^(2n) * base``; otherwise the polynomial is not in the tower and
        a ValueError is raised.
        """
        m = base.degree()
        coeffs: dict[int, Fraction] = {}
        for degree, component in p.homogeneous_components().items():
            level2 = degree - m
            if level2 < 0 or level2 % 2:
                raise ValueError(f"degree-{degree} component cannot sit over a degree-{m} base")
            n = level2 // 2
            reference = radius_power(base.num_vars, n) * base
            lead_exps, lead_coeff = reference.leading_term()
            ratio = component.coefficient(lead_exps) / lead_coeff
            if reference * ratio != component:
                raise ValueError(f"degree-{degree} component is not a multiple of r^{2 * n}*base")
            coeffs[n] = ratio
        return cls(params, m, base, coeffs)


def conjugate_weight(params: ModelParams, m: int, level: int, shift: Fraction | None = None) -> Fraction:
    """Diagonal weight of the inverse-ladder factor at tower level ``level``.

    Evaluates the ansatz ``(-t + a) / (C + t(t-1))`` at the diagonal
    eigenvalue ``t = -(m + 2*level + E)/2``; with the canonical shift ``a``
    this reduces to ``1 / (m + E + level)``.  ``shift`` overrides ``a`` for
    negative controls.
    """
    a = conjugate_shift(params, m) if shift is None else Fraction(shift)
    c = casimir_scalar(params, m)
    t = cartan_eigenvalue(params, m + 2 * level)
    denom = c + t * (t - 1)
    if denom == 0:
        raise SingularRepresentationError(
            f"weight denominator vanished at level {level} (m={m})"
        )
    return (-t + a) / denom


def apply_conjugate_weight(t: RadialTower, shift: Fraction | None = None) -> RadialTower:
    """Diagonal factor of the conjugate ladder; scales each level independently."""
    return t.map_coeffs(lambda n, c: c * conjugate_weight(t.params, t.m, n, shift))


def apply_conjugate_lowering(t: RadialTower, shift: Fraction | None = None) -> RadialTower:
    """Canonical conjugate of the raising operator: lowering after the
    diagonal weight.  Sends level ``n`` to ``n+1`` with factor
    ``1/(2(m+E+n))`` under the canonical shift."""
    weighted = apply_conjugate_weight(t, shift)
    return weighted.map_coeffs(lambda n, c: c / 2, shift=1)


def conjugate_ladder_residual(
    tower: RadialTower, n_max: int, shift: Fraction | None = None
) -> list[Poly]:
    """Residuals of the canonical commutation relation on each tower level.

    For each level ``n <= n_max`` the residual
    ``(raising . conjugate - conjugate . raising - 1)(r^(2n) * base)``
    is computed with the genuine exact raising operator on materialized
    states; all entries must be the zero polynomial.
    """
    params, base = tower.params, tower.base
    residuals = []
    for n in range(n_max + 1):
        state = RadialTower.single(params, base, n)
        poly_state = state.materialize()
        forward = apply_raising(params, apply_conjugate_lowering(state, shift).materialize())
        raised = apply_raising(params, poly_state)
        if raised.is_zero():
            backward = Poly.zero(base.num_vars)
        else:
            raised_tower = RadialTower.from_poly(params, base, raised)
            backward = apply_conjugate_lowering(raised_tower, shift).materialize()
        residuals.append(forward - backward - poly_state)
    return residuals


def conjugate_defining_residual(params: ModelParams, m: int, level: int) -> Fraction:
    """Scalar form of the defining relation for the conjugate weight.

    With ``F(t)`` the weight ansatz, checks
    ``F(t)*(C + t(t-1)) - F(t+1)*(C + t(t+1)) - 1`` at the level eigenvalue;
    exact zero certifies the shift and Casimir constants together.  Each
    bracket acts before its weight factor, so a vanishing bracket (the
    lowering-raising product annihilating the tower base) short-circuits the
    term instead of evaluating the weight at its pole.
    """
    a = conjugate_shift(params, m)
    c = casimir_scalar(params, m)
    t = cartan_eigenvalue(params, m + 2 * level)

    def term(weight_at: Fraction, bracket: Fraction) -> Fraction:
        if bracket == 0:
            return Fraction(0)
        denom = c + weight_at * (weight_at - 1)
        if denom == 0:
            raise SingularRepresentationError("weight denominator vanished")
        return (-weight_at + a) / denom * bracket

    return term(t, c + t * (t - 1)) - term(t + 1, c + t * (t + 1)) - 1
