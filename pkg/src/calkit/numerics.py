"""Floating-point verification layer.

The exact modules certify the polynomial identities; this layer certifies the
parts that are genuinely non-polynomial: the ground-state measure (pair-power
prefactor and Gaussian), Bessel/Laguerre special functions, and the action of
the singular Hamiltonians applied by finite differences at sampled chamber
points.

Design notes
------------
* The Bessel series head is summed in exact rational arithmetic (the inputs,
  being floats, are exact dyadic rationals), so there is no cancellation
  noise; only the final prefactor and the last rounding are floating point.
* Polynomial state values are computed exactly and converted to float at the
  last step, which keeps finite-difference stencils free of evaluation noise.
* Sampling is seeded and rejection-based; every report records the seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .coherent import CoherentSeries, bessel_order, laguerre_prefactor, laguerre_series_coeffs
from .exactcore import Poly
from .operators import Model, ModelParams, exp_raising

Coords = Sequence[float]
StateFunction = Callable[[Coords], float]


class DomainError(ValueError):
    """Argument where the function has a pole or is undefined."""


class RangeError(ValueError):
    """Argument outside the supported desk-scale range."""


class ProximityError(ValueError):
    """Evaluation point on or too near a singular hyperplane."""


class ConfigurationError(ValueError):
    """Stencil geometry incompatible with the point's separation."""


class TruncationError(RuntimeError):
    """Series order too small for the requested point and tolerance."""


# -- special functions ---------------------------------------------------------

GAMMA_POLE_MESSAGE = "gamma has poles at non-positive integers"


def gamma_real(x: float) -> float:
    """Gamma function for real argument away from the poles."""
    xf = float(x)
    if xf <= 0 and xf == int(xf):
        raise DomainError(GAMMA_POLE_MESSAGE)
    try:
        return math.gamma(xf)
    except ValueError as exc:  # pragma: no cover - guarded above
        raise DomainError(GAMMA_POLE_MESSAGE) from exc


BESSEL_NU_RANGE = (-0.5, 30.0)
BESSEL_X_RANGE = (0.0, 50.0)
_BESSEL_MAX_TERMS = 600
_BESSEL_TAIL = Fraction(1, 10**16)


def bessel_j(nu, x: float) -> float:
    """Bessel function of the first kind, real order, by its ascending series.

    The series ``sum (-1)^n (x/2)^(2n+nu) / (n! Gamma(nu+n+1))`` is summed
    with every term an exact rational (after factoring out ``(x/2)^nu /
    Gamma(nu+1)``), continuing until a geometric bound puts the dropped tail
    below 1e-16 of the accumulated head.  Exact summation removes the
    cancellation that otherwise destroys the ascending series at moderate
    arguments.
    """
    nu_f = Fraction(nu)
    nu_float = float(nu_f)
    x = float(x)
    if not BESSEL_NU_RANGE[0] <= nu_float <= BESSEL_NU_RANGE[1]:
        raise RangeError(f"order {nu_float} outside {BESSEL_NU_RANGE}")
    if not BESSEL_X_RANGE[0] <= x <= BESSEL_X_RANGE[1]:
        raise RangeError(f"argument {x} outside {BESSEL_X_RANGE}")
    if x == 0.0:
        if nu_f > 0:
            return 0.0
        if nu_f == 0:
            return 1.0
        raise DomainError("negative-order Bessel diverges at 0")
    quarter_x2 = Fraction(x) ** 2 / 4
    term = Fraction(1)
    total = term
    n = 0
    while True:
        n += 1
        if n > _BESSEL_MAX_TERMS:
            raise RangeError("Bessel series did not converge in the term budget")
        term = -term * quarter_x2 / (n * (nu_f + n))
        total += term
        ratio = quarter_x2 / ((n + 1) * (nu_f + n + 1))
        if ratio < Fraction(1, 2) and total:
            tail_bound = abs(term) * ratio / (1 - ratio)
            if tail_bound <= abs(total) * _BESSEL_TAIL:
                break
    prefactor = math.pow(x / 2.0, nu_float) / gamma_real(nu_float + 1.0)
    return prefactor * float(total)


def laguerre(n: int, alpha, x: float) -> float:
    """Generalized Laguerre polynomial by the stable three-term recurrence."""
    if n < 0:
        raise DomainError("Laguerre degree must be non-negative")
    a = float(alpha)
    x = float(x)
    previous = 1.0
    if n == 0:
        return previous
    current = 1.0 + a - x
    for k in range(1, n):
        previous, current = current, (
            (2 * k + 1 + a - x) * current - (k + a) * previous
        ) / (k + 1)
    return current


def laguerre_direct(n: int, alpha, x: float) -> float:
    """Direct coefficient sum; independent check of the recurrence."""
    a = float(alpha)
    x = float(x)
    total = 0.0
    for k in range(n + 1):
        binom = 1.0
        for j in range(n - k):
            binom *= (a + k + 1 + j) / (j + 1)
        total += (-1) ** k * binom * x**k / math.factorial(k)
    return total


def laguerre_bessel_identity_residual(alpha, x: float, z: float, terms: int) -> float:
    """Relative defect of the summation identity tying Laguerre to Bessel.

    Left side: ``J_a(2 sqrt(xz)) e^z (xz)^(-a/2)``; right side: the partial
    sum of ``z^n / Gamma(n+a+1) * L_n^a(x)`` with ``terms`` terms.
    """
    a = float(alpha)
    x = float(x)
    z = float(z)
    if x < 0 or z < 0:
        raise DomainError("identity arguments must be non-negative")
    if z == 0.0:
        lhs = 1.0 / gamma_real(a + 1.0)
    else:
        lhs = bessel_j(a, 2.0 * math.sqrt(x * z)) * math.exp(z) * (x * z) ** (-a / 2.0)
    partial = sum(
        z**n / gamma_real(n + a + 1.0) * laguerre(n, a, x) for n in range(terms)
    )
    return abs(lhs - partial) / abs(lhs)


# -- sampling and measures -------------------------------------------------------


@dataclass(frozen=True)
class SamplePoint:
    """Chamber point with its distance to the nearest singular hyperplane."""

    coords: tuple[float, ...]
    min_separation: float


def point_separation(params: ModelParams, coords: Coords) -> float:
    """Distance to the singular set: pair differences, plus pair sums and the
    coordinate axes for the reflection family."""
    values = [float(c) for c in coords]
    n = len(values)
    seps = [abs(values[i] - values[j]) for i in range(n) for j in range(i + 1, n)]
    if params.model is Model.BN:
        seps += [abs(values[i] + values[j]) for i in range(n) for j in range(i + 1, n)]
        seps += [abs(v) for v in values]
    return min(seps) if seps else math.inf


def sample_chamber_points(
    params: ModelParams,
    count: int,
    seed: int,
    low: float = 0.5,
    high: float = 3.0,
    delta: float = 0.2,
) -> list[SamplePoint]:
    """Seeded rejection sampling in the ordered box x_1 > x_2 > ... > x_N.

    Points keep pairwise separation (and distance to the reflection
    hyperplanes, for the reflection family) strictly above ``delta``.
    """
    rng = random.Random(seed)
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 10000 * count:
            raise ConfigurationError("rejection sampling stalled; loosen delta or the box")
        coords = sorted((rng.uniform(low, high) for _ in range(params.n)), reverse=True)
        sep = point_separation(params, coords)
        if sep > delta:
            points.append(SamplePoint(tuple(coords), sep))
    return points


def eval_measure(
    params: ModelParams,
    coords: Coords,
    include_gaussian: bool = False,
    delta: float = 0.0,
) -> float:
    """Ground-state measure at a point, accumulated in log space.

    Linear family: ``prod_{i<j} |x_i - x_j|^alpha``.  Reflection family:
    ``prod_{i<j} |x_i - x_j|^lam |x_i + x_j|^lam * prod_k |x_k|^lam1``.
    ``include_gaussian`` multiplies by ``exp(-sum x_i^2 / 2)``.
    """
    values = [float(c) for c in coords]
    if len(values) != params.n:
        raise ValueError(f"point has {len(values)} coordinates, expected {params.n}")
    sep = point_separation(params, values)
    if sep <= delta:
        raise ProximityError(f"separation {sep} is within delta={delta} of a singular locus")
    if sep == 0.0:
        raise ProximityError("point lies on a singular hyperplane")
    log_total = 0.0
    n = params.n
    if params.model is Model.AN:
        exponent = float(params.alpha)
        for i in range(n):
            for j in range(i + 1, n):
                log_total += exponent * math.log(abs(values[i] - values[j]))
    else:
        pair_exp = float(params.lam)
        body_exp = float(params.lam1)
        for i in range(n):
            for j in range(i + 1, n):
                log_total += pair_exp * math.log(abs(values[i] - values[j]))
                log_total += pair_exp * math.log(abs(values[i] + values[j]))
        for v in values:
            log_total += body_exp * math.log(abs(v))
    if include_gaussian:
        log_total -= sum(v * v for v in values) / 2.0
    return math.exp(log_total)


# -- state evaluation --------------------------------------------------------------


class EvalMode:
    POLYNOMIAL = "polynomial_only"
    WITH_JASTROW = "with_jastrow"
    WITH_JASTROW_GAUSSIAN = "with_jastrow_gaussian"


def _series_value_exact(series: CoherentSeries, coords: Coords, tolerance: float | None) -> Fraction:
    exact_coords = [Fraction(float(c)) for c in coords]
    r2 = sum((c * c for c in exact_coords), Fraction(0))
    total = sum((c * r2**n for n, c in series.tower.coeffs.items()), Fraction(0))
    base_value = series.tower.base.evaluate(exact_coords)
    if tolerance is not None:
        # first omitted term must be far below the tolerance at this radius
        nxt = series.coefficient(series.order) * Fraction(-series.k_squared, 4)
        nxt /= (series.order + 1) * (series.nu + series.order + 1)
        omitted = abs(nxt * r2 ** (series.order + 1) * base_value)
        allowance = Fraction(1, 1000) * Fraction(float(tolerance)) * abs(total * base_value)
        if omitted > allowance:
            raise TruncationError(
                f"series order {series.order} too small at r^2={float(r2):.3f}; increase the order"
            )
    return total * base_value


def eval_state(
    state: CoherentSeries | Poly,
    params: ModelParams,
    coords: Coords,
    mode: str = EvalMode.POLYNOMIAL,
    tolerance: float | None = None,
    delta: float = 0.0,
) -> float:
    """Evaluate a polynomial state or coherent series at a point.

    The polynomial part is evaluated in exact rational arithmetic and rounded
    once; measure factors (selected by ``mode``) are floating point.
    """
    if isinstance(state, CoherentSeries):
        exact = _series_value_exact(state, coords, tolerance)
    else:
        exact = state.evaluate([Fraction(float(c)) for c in coords])
    value = float(exact)
    if mode == EvalMode.POLYNOMIAL:
        return value
    if mode == EvalMode.WITH_JASTROW:
        return value * eval_measure(params, coords, include_gaussian=False, delta=delta)
    if mode == EvalMode.WITH_JASTROW_GAUSSIAN:
        return value * eval_measure(params, coords, include_gaussian=True, delta=delta)
    raise ValueError(f"unknown evaluation mode {mode!r}")


def closed_form_state(
    params: ModelParams, base: Poly, k_squared, nu_shift: int = 0
) -> StateFunction:
    """Pointwise closed form of the displaced kernel state.

    Returns ``x -> Gamma(nu+1) (k r / 2)^(-nu) J_nu(k r) base(x)`` with
    ``nu`` optionally shifted (the shifted version is *not* an eigenstate and
    serves as a negative control).
    """
    nu = bessel_order(params, base.degree()) + nu_shift
    nu_float = float(nu)
    k = math.sqrt(float(Fraction(k_squared)))
    normalization = gamma_real(nu_float + 1.0)

    def value(coords: Coords) -> float:
        exact_coords = [Fraction(float(c)) for c in coords]
        r = math.sqrt(float(sum((c * c for c in exact_coords), Fraction(0))))
        base_value = float(base.evaluate(exact_coords))
        if k == 0.0:
            return base_value
        kr = k * r
        return normalization * math.pow(kr / 2.0, -nu_float) * bessel_j(nu, kr) * base_value

    return value


# -- finite differences -------------------------------------------------------------


@dataclass(frozen=True)
class FDScheme:
    """Central-difference scheme: order 2 or 4, with an optional fixed step.

    Without a fixed step, the step is ``step_scale`` times the evaluation
    point's distance to the singular set.
    """

    order: int = 4
    step: float | None = None
    step_scale: float = 1e-3

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ConfigurationError("finite-difference order must be 2 or 4")

    def resolve_step(self, separation: float) -> float:
        return self.step if self.step is not None else self.step_scale * separation

    def reach(self, h: float) -> float:
        return h * (self.order // 2)


def fd_laplacian(f: StateFunction, coords: Coords, scheme: FDScheme, h: float) -> float:
    """Central-difference Laplacian of ``f`` at ``coords``."""
    values = [float(c) for c in coords]
    center = f(values)
    total = 0.0
    for i in range(len(values)):
        def shifted(offset: float, i=i) -> float:
            moved = list(values)
            moved[i] += offset
            return f(moved)

        if scheme.order == 2:
            total += (shifted(h) - 2.0 * center + shifted(-h)) / (h * h)
        else:
            total += (
                -shifted(2 * h) + 16.0 * shifted(h) - 30.0 * center
                + 16.0 * shifted(-h) - shifted(-2 * h)
            ) / (12.0 * h * h)
    return total


def potential_value(params: ModelParams, coords: Coords, harmonic: bool) -> float:
    """Exact-formula potential of the selected Hamiltonian at a point."""
    values = [float(c) for c in coords]
    n = params.n
    g2 = float(params.g_squared)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            diff = values[i] - values[j]
            total += g2 / (diff * diff)          # both (i,j) orders folded
            if params.model is Model.BN:
                s = values[i] + values[j]
                total += g2 / (s * s)
    if params.model is Model.BN:
        g1 = float(params.g1_squared)
        total += 0.5 * g1 * sum(1.0 / (v * v) for v in values)
    if harmonic:
        total += 0.5 * sum(v * v for v in values)
    return total


def fd_apply_hamiltonian(
    params: ModelParams,
    f: StateFunction,
    coords: Coords,
    scheme: FDScheme = FDScheme(),
    harmonic: bool = False,
) -> float:
    """(H f)(point): stencil Laplacian plus exact potential evaluation.

    ``harmonic=True`` selects the confined Hamiltonian, ``False`` the
    scattering one (no trap).
    """
    values = [float(c) for c in coords]
    separation = point_separation(params, values)
    h = scheme.resolve_step(separation)
    if h <= 0:
        raise ConfigurationError("step must be positive")
    if scheme.reach(h) * 8.0 > separation:
        raise ConfigurationError(
            f"stencil reach {scheme.reach(h)} too large for separation {separation}"
        )
    kinetic = -0.5 * fd_laplacian(f, values, scheme, h)
    return kinetic + potential_value(params, values, harmonic) * f(values)


# -- residual reports ----------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    check_name: str
    params: dict
    points_used: int
    max_relative_error: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", self.max_relative_error <= self.tolerance)


def _relative_residuals(pairs: list[tuple[float, float]]) -> float:
    """max |lhs - rhs| / (|rhs| + floor) with a shared near-node floor."""
    scale = max((abs(rhs) for _, rhs in pairs), default=0.0)
    floor = 1e-9 * scale if scale else 1e-300
    return max((abs(lhs - rhs) / (abs(rhs) + floor) for lhs, rhs in pairs), default=0.0)


def eigen_residual_scattering(
    params: ModelParams,
    state: CoherentSeries | StateFunction,
    k_squared,
    points: Sequence[SamplePoint],
    scheme: FDScheme = FDScheme(),
    tolerance: float = 1e-6,
    check_name: str = "scattering_eigenvalue",
) -> ResidualReport:
    """Does H (measure * state) equal (k^2/2) * (measure * state)?

    ``state`` is either an exact coherent series (order guarded against
    truncation at the sampled radii) or a pointwise closed-form callable.
    """
    k2 = float(Fraction(k_squared))

    def dressed(coords: Coords) -> float:
        measure = eval_measure(params, coords)
        if isinstance(state, CoherentSeries):
            bare = eval_state(state, params, coords, EvalMode.POLYNOMIAL, tolerance=tolerance)
        else:
            bare = state(coords)
        return measure * bare

    pairs = []
    for point in points:
        lhs = fd_apply_hamiltonian(params, dressed, point.coords, scheme, harmonic=False)
        rhs = (k2 / 2.0) * dressed(point.coords)
        pairs.append((lhs, rhs))
    report_params = dict(params.describe())
    report_params.update({"k_squared": str(Fraction(k_squared)), "fd_order": scheme.order})
    return ResidualReport(check_name, report_params, len(points), _relative_residuals(pairs), tolerance)


def eigen_residual_bound(
    params: ModelParams,
    base_poly: Poly,
    points: Sequence[SamplePoint],
    scheme: FDScheme = FDScheme(),
    tolerance: float = 1e-6,
    check_name: str = "bound_spectrum",
) -> ResidualReport:
    """Confined-model ladder check on a dressed polynomial.

    The state is ``measure * gaussian * exp(-raising/2) q``; the expected
    eigenvalue for homogeneous symmetric ``q`` of degree m is
    ``m + ground_energy``.
    """
    if not base_poly.is_homogeneous():
        raise ValueError("bound-state seed must be homogeneous")
    m = max(base_poly.degree(), 0)
    dressed_poly = exp_raising(params, Fraction(-1, 2), base_poly)
    energy = float(m + params.ground_energy)

    def dressed(coords: Coords) -> float:
        measure = eval_measure(params, coords, include_gaussian=True)
        bare = eval_state(dressed_poly, params, coords, EvalMode.POLYNOMIAL)
        return measure * bare

    pairs = []
    for point in points:
        lhs = fd_apply_hamiltonian(params, dressed, point.coords, scheme, harmonic=True)
        rhs = energy * dressed(point.coords)
        pairs.append((lhs, rhs))
    report_params = dict(params.describe())
    report_params.update({"degree": m, "eigenvalue": str(m + params.ground_energy),
                          "fd_order": scheme.order})
    return ResidualReport(check_name, report_params, len(points), _relative_residuals(pairs), tolerance)


def bessel_closed_form_check(
    params: ModelParams,
    series: CoherentSeries,
    points: Sequence[SamplePoint],
    tolerance: float = 1e-10,
    check_name: str = "bessel_closed_form",
) -> ResidualReport:
    """Truncated series versus its Bessel closed form, pointwise."""
    closed = closed_form_state(params, series.tower.base, series.k_squared)
    pairs = []
    for point in points:
        direct = eval_state(series, params, point.coords, EvalMode.POLYNOMIAL, tolerance=tolerance)
        pairs.append((direct, closed(point.coords)))
    report_params = dict(params.describe())
    report_params.update({
        "m": series.m, "k_squared": str(series.k_squared),
        "order": series.order, "nu": str(series.nu),
    })
    return ResidualReport(check_name, report_params, len(points), _relative_residuals(pairs), tolerance)


def laguerre_form_ratio_residual(
    params: ModelParams,
    series: CoherentSeries,
    points: Sequence[SamplePoint],
    terms: int | None = None,
) -> float:
    """Constancy defect of (Laguerre form) / (direct series) across points.

    The two representations of the state differ by an x-independent constant;
    returns the max relative spread of the pointwise ratio.
    """
    terms = series.order if terms is None else terms
    weights = laguerre_series_coeffs(params, series.m, series.k_squared, terms)
    prefactor = laguerre_prefactor(series.k_squared)
    nu_float = float(series.nu)
    ratios = []
    for point in points:
        exact_coords = [Fraction(float(c)) for c in point.coords]
        half_r2 = float(sum((c * c for c in exact_coords), Fraction(0))) / 2.0
        base_value = float(series.tower.base.evaluate(exact_coords))
        lag = prefactor * sum(
            w.weight * laguerre(w.n, nu_float, half_r2) for w in weights
        ) * base_value
        direct = eval_state(series, params, point.coords, EvalMode.POLYNOMIAL)
        ratios.append(lag / direct)
    reference = ratios[0]
    return max(abs(r - reference) / abs(reference) for r in ratios)
