"""Exact application of the singular ladder operators to polynomials.

Two families are supported, selected by :class:`ModelParams`:

* linear family (``Model.AN``): raising operator
  ``(1/2) sum_i d_i^2 + alpha * sum_{i<j} (d_i - d_j) / (x_i - x_j)``
* reflection family (``Model.BN``): raising operator
  ``(1/2) sum_i d_i^2 + c * sum_{i<j} (x_i d_i - x_j d_j) / (x_i^2 - x_j^2)
  + lambda1 * sum_i d_i / x_i``

The singular pair terms act through exact polynomial division; on symmetric
input (even per variable for the reflection family) the quotients are exact,
and anything outside that domain surfaces as a ``DivisibilityError``.

The pair coefficient ``c`` defaults to ``2*lambda`` (the "doubled" convention):
that is the unique normalization under which the commutator of the raising and
lowering operators closes onto the diagonal generator built from the stated
ground-state energy.  ``pair_doubled=False`` keeps the single-``lambda``
coefficient as a deliberately broken control.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .exactcore import (
    DivisibilityError,
    Exponents,
    Poly,
    euler_apply,
    synthetic_divide_linear,
    synthetic_divide_square,
)


_ZERO = Fraction(0)


class Model(Enum):
    AN = "an"
    BN = "bn"


class SingularCouplingError(ValueError):
    """Model parameters outside the admissible range."""


@dataclass(frozen=True)
class ModelParams:
    """Particle number and exact couplings, with derived constants.

    ``alpha`` applies to the linear family; ``lam`` (pair) and ``lam1``
    (one-body) to the reflection family.  The inverse-square strengths are
    derived as ``g^2 = alpha(alpha-1)`` (resp. ``lam(lam-1)``,
    ``lam1(lam1-1)``), so every operator coefficient stays rational.
    """

    model: Model
    n: int
    alpha: Fraction | None = None
    lam: Fraction | None = None
    lam1: Fraction | None = None
    pair_doubled: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise SingularCouplingError("particle number must be at least 1")
        if self.model is Model.AN:
            if self.alpha is None:
                raise SingularCouplingError("linear family requires alpha")
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        else:
            if self.lam is None or self.lam1 is None:
                raise SingularCouplingError("reflection family requires lam and lam1")
            object.__setattr__(self, "lam", Fraction(self.lam))
            object.__setattr__(self, "lam1", Fraction(self.lam1))

    @classmethod
    def linear(cls, n: int, alpha, pair_doubled: bool = True) -> "ModelParams":
        return cls(model=Model.AN, n=n, alpha=Fraction(alpha), pair_doubled=pair_doubled)

    @classmethod
    def reflection(cls, n: int, lam, lam1, pair_doubled: bool = True) -> "ModelParams":
        return cls(
            model=Model.BN, n=n, lam=Fraction(lam), lam1=Fraction(lam1),
            pair_doubled=pair_doubled,
        )

    @property
    def g_squared(self) -> Fraction:
        if self.model is Model.AN:
            return self.alpha * (self.alpha - 1)
        return self.lam * (self.lam - 1)

    @property
    def g1_squared(self) -> Fraction:
        if self.model is Model.AN:
            raise SingularCouplingError("one-body coupling exists only in the reflection family")
        return self.lam1 * (self.lam1 - 1)

    @property
    def ground_energy(self) -> Fraction:
        """Ground-state energy of the confined model.

        Linear family: N/2 + alpha*N(N-1)/2.
        Reflection family: N*(1/2 + (N-1)*lam + lam1).
        """
        n = self.n
        if self.model is Model.AN:
            return Fraction(n, 2) + self.alpha * n * (n - 1) / 2
        return n * (Fraction(1, 2) + (n - 1) * self.lam + self.lam1)

    def describe(self) -> dict:
        out = {"model": self.model.value, "n": self.n}
        if self.model is Model.AN:
            out["alpha"] = str(self.alpha)
        else:
            out["lambda"] = str(self.lam)
            out["lambda1"] = str(self.lam1)
            out["pair_coefficient"] = "doubled" if self.pair_doubled else "single"
        return out


def half_laplacian(p: Poly) -> Poly:
    out: dict[Exponents, Fraction] = {}
    _accumulate_half_laplacian(p, out)
    return Poly._raw(p.num_vars, out)


def _accumulate_half_laplacian(p: Poly, out: dict[Exponents, Fraction]) -> None:
    for exps, coeff in p.terms.items():
        for i, e in enumerate(exps):
            if e >= 2:
                key = exps[:i] + (e - 2,) + exps[i + 1:]
                value = coeff * (e * (e - 1) // 2)
                acc = out.get(key)
                acc = value if acc is None else acc + value
                if acc:
                    out[key] = acc
                else:
                    del out[key]


def _rest_of(exps: Exponents, i: int, j: int) -> Exponents:
    return exps[:i] + exps[i + 1: j] + exps[j + 1:]


@lru_cache(maxsize=None)
def radius_squared(num_vars: int) -> Poly:
    return Poly(num_vars, {
        tuple(2 if k == i else 0 for k in range(num_vars)): Fraction(1)
        for i in range(num_vars)
    })


@lru_cache(maxsize=None)
def radius_power(num_vars: int, n: int) -> Poly:
    """Cached ``(sum_i x_i^2)^n``; shared by the tower machinery."""
    if n == 0:
        return Poly.const(num_vars, 1)
    return radius_power(num_vars, n - 1) * radius_squared(num_vars)


def apply_raising(params: ModelParams, p: Poly) -> Poly:
    """Generalized Laplacian of the selected family; lowers degree by 2.

    The pair terms are exact divided differences: the numerator
    (for the linear family, ``d_i p - d_j p``; for the reflection family,
    ``x_i d_i p - x_j d_j p``) is assembled directly into per-block synthetic
    divisions by ``x_i - x_j`` (resp. ``x_i^2 - x_j^2``), whose remainder
    checks reject inputs outside the operator's domain.
    """
    if p.num_vars != params.n:
        raise ValueError(f"polynomial has {p.num_vars} variables, params expect {params.n}")
    if p.is_zero():
        return p
    terms = p.terms
    n = params.n
    out: dict[Exponents, Fraction] = {}
    _accumulate_half_laplacian(p, out)
    if params.model is Model.AN:
        alpha = params.alpha
        if alpha:
            for i in range(n):
                for j in range(i + 1, n):
                    groups: dict[tuple, dict[int, Fraction]] = {}
                    for exps, coeff in terms.items():
                        a, b = exps[i], exps[j]
                        if not (a or b):
                            continue
                        block = groups.setdefault((_rest_of(exps, i, j), a + b - 1), {})
                        if a:
                            block[a - 1] = block.get(a - 1, _ZERO) + coeff * a
                        if b:
                            block[a] = block.get(a, _ZERO) - coeff * b
                    synthetic_divide_linear(groups, i, j, out, alpha)
    else:
        pair = (2 * params.lam) if params.pair_doubled else params.lam
        if pair:
            for i in range(n):
                for j in range(i + 1, n):
                    groups = {}
                    for exps, coeff in terms.items():
                        a, b = exps[i], exps[j]
                        if a == b:
                            continue
                        block = groups.setdefault((_rest_of(exps, i, j), a + b, a % 2), {})
                        block[a] = block.get(a, _ZERO) + coeff * (a - b)
                    synthetic_divide_square(groups, i, j, out, pair)
        lam1 = params.lam1
        if lam1:
            for exps, coeff in terms.items():
                for i, e in enumerate(exps):
                    if e == 0:
                        continue
                    if e == 1:
                        raise DivisibilityError(
                            f"one-body term: x{i + 1} appears to an odd power"
                        )
                    key = exps[:i] + (e - 2,) + exps[i + 1:]
                    value = coeff * e * lam1
                    acc = out.get(key)
                    acc = value if acc is None else acc + value
                    if acc:
                        out[key] = acc
                    else:
                        del out[key]
    return Poly._raw(p.num_vars, out)


def apply_cartan(params: ModelParams, p: Poly) -> Poly:
    """Diagonal generator: -(euler + ground_energy)/2.

    Acts on a homogeneous degree-m polynomial as the scalar
    -(m + ground_energy)/2.
    """
    return (euler_apply(p) + p * params.ground_energy) * Fraction(-1, 2)


def apply_lowering(p: Poly) -> Poly:
    """Multiplication by (sum_i x_i^2) / 2; raises degree by 2."""
    return radius_squared(p.num_vars) * p * Fraction(1, 2)


def cartan_eigenvalue(params: ModelParams, degree: int) -> Fraction:
    return -Fraction(degree + params.ground_energy, 2)


def exp_raising(params: ModelParams, coefficient, p: Poly) -> Poly:
    """Exact nilpotent exponential ``exp(c * raising)`` applied to ``p``.

    The raising operator strictly lowers degree, so the series terminates
    after ``deg(p)//2 + 1`` terms.
    """
    coefficient = Fraction(coefficient)
    total = p
    term = p
    k = 0
    max_steps = max(p.degree(), 0) // 2 + 1
    while not term.is_zero():
        k += 1
        if k > max_steps:
            raise AssertionError("nilpotent exponential failed to terminate")
        term = apply_raising(params, term) * (coefficient / k)
        total = total + term
    return total


def scattering_eigenvalue(k_squared) -> Fraction:
    """Energy of the free-momentum scattering state: k^2 / 2."""
    return Fraction(k_squared) / 2
