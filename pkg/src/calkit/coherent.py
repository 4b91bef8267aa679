"""Raising-operator eigenstates built by displacing a kernel polynomial.

Applying ``exp(-(k^2/2) * conjugate_lowering)`` to a kernel polynomial of
degree ``m`` produces, level by level, the exact series

    sum_n  c_n r^(2n) base,   c_n = (-k^2/4)^n / (n! * (nu+1)(nu+2)...(nu+n))

with ``nu = E - 1 + m``.  The series is a raising-operator eigenstate with
eigenvalue ``-k^2/2``: applying the raising operator to the order-M truncation
reproduces ``-k^2/2`` times the order-(M-1) truncation exactly, which is the
form verified here.  The same coefficients are the Taylor data of
``Gamma(nu+1) (kr/2)^(-nu) J_nu(kr)``, so the series has a Bessel closed form;
this module exposes its parameters, and the numeric layer does the pointwise
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactcore import Poly
from .operators import ModelParams, apply_raising
from .su11 import RadialTower, apply_conjugate_lowering


@dataclass(frozen=True)
class CoherentSeries:
    """Truncated displacement series over a kernel base.

    ``tower`` holds the exact coefficients c_0 .. c_order; ``nu`` is the
    closed-form Bessel order.  c_0 = 1 (the state is unnormalized).
    """

    tower: RadialTower
    k_squared: Fraction
    order: int
    nu: Fraction

    @property
    def params(self) -> ModelParams:
        return self.tower.params

    @property
    def m(self) -> int:
        return self.tower.m

    def coefficient(self, n: int) -> Fraction:
        return self.tower.coeffs.get(n, Fraction(0))

    def coefficients(self) -> list[tuple[int, Fraction]]:
        return [(n, self.coefficient(n)) for n in range(self.order + 1)]

    def truncated(self, order: int) -> "CoherentSeries":
        if order > self.order:
            raise ValueError("cannot extend a series by truncation")
        kept = {n: c for n, c in self.tower.coeffs.items() if n <= order}
        return CoherentSeries(
            RadialTower(self.tower.params, self.m, self.tower.base, kept),
            self.k_squared, order, self.nu,
        )

    def materialize(self) -> Poly:
        return self.tower.materialize()


def bessel_order(params: ModelParams, m: int) -> Fraction:
    """Closed-form Bessel order: ground_energy - 1 + m."""
    return params.ground_energy - 1 + m


def build_coherent_series(params: ModelParams, base: Poly, k_squared, order: int) -> CoherentSeries:
    """Exact displacement series of truncation order ``order`` over ``base``.

    ``base`` must be a kernel polynomial (checked by the tower constructor).
    Negative ``k_squared`` is admitted for analytic-continuation experiments;
    the coefficients stay exact either way.
    """
    k_squared = Fraction(k_squared)
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    state = RadialTower.single(params, base)
    total = dict(state.coeffs)
    term = state
    for j in range(1, order + 1):
        # next term of exp(-(k^2/2) T): multiply by (-k^2/2)/j and one ladder step
        term = apply_conjugate_lowering(term).map_coeffs(
            lambda n, c: c * (-k_squared / 2) / j
        )
        for n, c in term.coeffs.items():
            total[n] = total.get(n, Fraction(0)) + c
    tower = RadialTower(params, base.degree(), base, total)
    return CoherentSeries(tower, k_squared, order, bessel_order(params, base.degree()))


def coefficient_closed_form(nu: Fraction, k_squared: Fraction, n: int) -> Fraction:
    """c_n from the falling-product formula; independent of the ladder recursion."""
    value = Fraction(1)
    for j in range(1, n + 1):
        value *= Fraction(-k_squared, 4) / (j * (nu + j))
    return value


def recurrence_residual(params: ModelParams, series: CoherentSeries) -> list[Poly]:
    """Level-resolved residual of the eigenstate relation on the truncation.

    Computes ``raising(psi_M) + (k^2/2) psi_(M-1)`` with the genuine raising
    operator and splits it into homogeneous components (level n covers degree
    m + 2n).  Every entry must be the zero polynomial.
    """
    psi = series.materialize()
    applied = apply_raising(params, psi)
    if series.order >= 1:
        lower = series.truncated(series.order - 1).materialize()
    else:
        lower = Poly.zero(psi.num_vars)
    residual = applied + lower * (series.k_squared / 2)
    components = residual.homogeneous_components()
    out = []
    for n in range(max(series.order, 1)):
        degree = series.m + 2 * n
        out.append(components.get(degree, Poly.zero(psi.num_vars)))
    leftover = [d for d in components if d > series.m + 2 * (max(series.order, 1) - 1)]
    if leftover:
        raise AssertionError(f"residual has unexpected degrees {leftover}")
    return out


@dataclass(frozen=True)
class ClosedForm:
    """Parameters of the Bessel closed form matching the series with c_0 = 1.

    The materialized series converges to
    ``normalization * (k r / 2)^(-nu) * J_nu(k r) * base(x)``
    with ``normalization = Gamma(nu + 1)`` and raising-operator eigenvalue
    ``-k^2/2``.
    """

    nu: Fraction
    normalization: float
    eigenvalue: Fraction


def closed_form_params(params: ModelParams, m: int, k_squared=Fraction(0)) -> ClosedForm:
    nu = bessel_order(params, m)
    return ClosedForm(
        nu=nu,
        normalization=math.gamma(float(nu) + 1.0),
        eigenvalue=-Fraction(k_squared) / 2,
    )


@dataclass(frozen=True)
class LaguerreTerm:
    n: int
    weight: float
    laguerre_order: Fraction


def laguerre_series_coeffs(
    params: ModelParams, m: int, k_squared, order: int
) -> list[LaguerreTerm]:
    """Weights of the alternative Laguerre representation of the same state.

    Term n is ``weight_n * L_n^(nu)(r^2/2)`` with
    ``weight_n = (k^2/2)^n / Gamma(nu + n + 1)``; the representation carries
    an overall ``exp(-k^2/4)`` prefactor which is NOT folded into the weights.
    Used only for numeric cross-checks against the direct series, to which it
    is pointwise proportional with an x-independent ratio.
    """
    nu = bessel_order(params, m)
    k_squared = Fraction(k_squared)
    base_gamma = math.gamma(float(nu) + 1.0)
    terms = []
    rising = Fraction(1)   # (nu+1)(nu+2)...(nu+n), exact
    power = Fraction(1)    # (k^2/2)^n, exact
    for n in range(order + 1):
        if n:
            rising *= nu + n
            power *= k_squared / 2
        terms.append(LaguerreTerm(n, float(power / rising) / base_gamma, nu))
    return terms


def laguerre_prefactor(k_squared) -> float:
    """The separate scalar prefactor of the Laguerre representation."""
    return math.exp(-float(Fraction(k_squared)) / 4.0)
