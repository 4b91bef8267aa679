"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a mapping from exponent tuples (one non-negative integer per
variable) to ``fractions.Fraction`` coefficients.  Zero coefficients are never
stored, so polynomial identity testing is exact and reliable.  All values are
immutable after construction; every operation returns a new ``Poly``.

Term order throughout is graded lexicographic: compare total degree first,
then the exponent tuple lexicographically.  Variables are 0-indexed in the
API and print as ``x1 .. xN``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

Exponents = tuple[int, ...]
Scalar = Fraction


class DimensionMismatch(ValueError):
    """Operands live in polynomial rings with different variable counts."""


class DivisibilityError(ArithmeticError):
    """Exact division left a nonzero remainder.

    Raised by the division routines when the dividend is not a polynomial
    multiple of the divisor; the singular-operator code relies on this to
    reject inputs outside an operator's domain.
    """


def _as_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact scalar, got {type(value).__name__}")


def grlex_key(exps: Exponents) -> tuple[int, Exponents]:
    """Sort key realizing graded lexicographic order (ascending)."""
    return (sum(exps), exps)


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars: int, terms: Mapping[Exponents, Fraction] | None = None):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            coeff = _as_scalar(coeff)
            if coeff == 0:
                continue
            exps = tuple(exps)
            if len(exps) != num_vars:
                raise DimensionMismatch(
                    f"exponent vector {exps} has length {len(exps)}, expected {num_vars}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            clean[exps] = coeff
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "_terms", clean)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Exponents, Fraction]) -> "Poly":
        """Internal constructor for pre-normalized term dicts (no validation)."""
        self = object.__new__(cls)
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "_terms", terms)
        return self

    @classmethod
    def zero(cls, num_vars: int) -> "Poly":
        return cls(num_vars)

    @classmethod
    def const(cls, num_vars: int, value) -> "Poly":
        return cls(num_vars, {(0,) * num_vars: _as_scalar(value)})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Poly":
        """The polynomial for a single variable (0-indexed)."""
        if not 0 <= index < num_vars:
            raise IndexError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, num_vars: int, exps: Sequence[int], coeff=1) -> "Poly":
        return cls(num_vars, {tuple(exps): _as_scalar(coeff)})

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self._terms}
        return len(degrees) <= 1

    def homogeneous_components(self) -> dict[int, "Poly"]:
        """Split into homogeneous parts, keyed by degree."""
        buckets: dict[int, dict[Exponents, Fraction]] = {}
        for exps, coeff in self._terms.items():
            buckets.setdefault(sum(exps), {})[exps] = coeff
        return {d: Poly._raw(self.num_vars, t) for d, t in sorted(buckets.items())}

    def leading_term(self) -> tuple[Exponents, Fraction]:
        """Largest term in graded lexicographic order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self._terms, key=grlex_key)
        return exps, self._terms[exps]

    def sorted_terms(self, reverse: bool = True) -> list[tuple[Exponents, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=reverse)

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self._terms.items())

    # -- arithmetic ----------------------------------------------------------

    def _check_compatible(self, other: "Poly") -> None:
        if self.num_vars != other.num_vars:
            raise DimensionMismatch(
                f"polynomials in {self.num_vars} and {other.num_vars} variables"
            )

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.num_vars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num_vars, frozenset(self._terms.items())))

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.num_vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            acc = out.get(exps)
            if acc is None:
                out[exps] = coeff
            elif acc == -coeff:
                del out[exps]
            else:
                out[exps] = acc + coeff
        return Poly._raw(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.num_vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            acc = out.get(exps)
            if acc is None:
                out[exps] = -coeff
            elif acc == coeff:
                del out[exps]
            else:
                out[exps] = acc - coeff
        return Poly._raw(self.num_vars, out)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction, str)):
            scalar = _as_scalar(other)
            if scalar == 0:
                return Poly.zero(self.num_vars)
            return Poly._raw(self.num_vars, {e: c * scalar for e, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_compatible(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(key)
                if acc is None:
                    out[key] = c1 * c2
                else:
                    acc = acc + c1 * c2
                    if acc:
                        out[key] = acc
                    else:
                        del out[key]
        return Poly._raw(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(self.num_vars, 1)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def diff(self, index: int) -> "Poly":
        """Exact partial derivative with respect to variable ``index`` (0-based)."""
        if not 0 <= index < self.num_vars:
            raise IndexError(f"variable index {index} out of range for {self.num_vars} variables")
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            e = exps[index]
            if e == 0:
                continue
            out[exps[:index] + (e - 1,) + exps[index + 1:]] = coeff * e
        return Poly._raw(self.num_vars, out)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Exact evaluation at a point of rational coordinates."""
        if len(point) != self.num_vars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.num_vars}")
        values = [_as_scalar(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def swap_variables(self, i: int, j: int) -> "Poly":
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            e = list(exps)
            e[i], e[j] = e[j], e[i]
            out[tuple(e)] = coeff
        return Poly._raw(self.num_vars, out)

    def __repr__(self) -> str:
        from .grammar import poly_to_text

        return f"Poly({self.num_vars}, {poly_to_text(self)!r})"


def euler_apply(p: Poly) -> Poly:
    """Degree-weighting operator: sum_i x_i d/dx_i."""
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in p._terms.items():
        d = sum(exps)
        if d:
            out[exps] = coeff * d
    return Poly._raw(p.num_vars, out)


def is_symmetric(p: Poly) -> bool:
    """True iff ``p`` is invariant under every permutation of the variables.

    Adjacent transpositions generate the full symmetric group, so checking
    those suffices.
    """
    for i in range(p.num_vars - 1):
        if p.swap_variables(i, i + 1) != p:
            return False
    return True


def is_even_in_each_variable(p: Poly) -> bool:
    return all(e % 2 == 0 for exps in p.terms for e in exps)


# -- exact division ----------------------------------------------------------


def exact_divide(p: Poly, d: Poly) -> Poly:
    """Return ``q`` with ``p == q * d``, or raise :class:`DivisibilityError`.

    Single-divisor multivariate division in graded lexicographic order; for a
    single divisor the remainder is zero exactly when ``d`` divides ``p``, so
    a nonzero remainder is a definite negative.
    """
    if isinstance(d, (int, Fraction)):
        d = Poly.const(p.num_vars, d)
    p._check_compatible(d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead_exps, lead_coeff = d.leading_term()
    rest = [(e, c) for e, c in d.terms.items() if e != lead_exps]
    work = dict(p.terms)
    quotient: dict[Exponents, Fraction] = {}
    while work:
        exps = max(work, key=grlex_key)
        coeff = work.pop(exps)
        q_exps = tuple(a - b for a, b in zip(exps, lead_exps))
        if any(e < 0 for e in q_exps):
            raise DivisibilityError(
                f"term with exponents {exps} is not divisible by the divisor's leading term"
            )
        q_coeff = coeff / lead_coeff
        quotient[q_exps] = quotient.get(q_exps, Fraction(0)) + q_coeff
        for e, c in rest:
            key = tuple(a + b for a, b in zip(q_exps, e))
            acc = work.get(key, Fraction(0)) - q_coeff * c
            if acc:
                work[key] = acc
            else:
                work.pop(key, None)
    return Poly(p.num_vars, quotient)


def _difference_groups(
    terms: dict[Exponents, Fraction] | "Poly", i: int, j: int
) -> dict[tuple, dict[int, Fraction]]:
    """Group terms by exponents outside {i, j} and pair-degree in (i, j)."""
    if isinstance(terms, Poly):
        terms = terms._terms
    groups: dict[tuple, dict[int, Fraction]] = {}
    for exps, coeff in terms.items():
        rest = exps[:i] + exps[i + 1: j] + exps[j + 1:] if i < j else \
            exps[:j] + exps[j + 1: i] + exps[i + 1:]
        a = exps[i]
        groups.setdefault((rest, a + exps[j]), {})[a] = coeff
    return groups


def _rebuild_exponents(rest: tuple, i: int, j: int, ei: int, ej: int) -> Exponents:
    lo, hi = (i, j) if i < j else (j, i)
    exps = list(rest[:lo]) + [0] + list(rest[lo: hi - 1]) + [0] + list(rest[hi - 1:])
    exps[i], exps[j] = ei, ej
    return tuple(exps)


def synthetic_divide_linear(
    groups: dict[tuple, dict[int, Fraction]],
    i: int,
    j: int,
    out: dict[Exponents, Fraction],
    factor: Fraction = Fraction(1),
) -> None:
    """Divide grouped numerator data by ``x_i - x_j``, accumulating into ``out``.

    ``groups`` maps (rest-exponents, pair-degree s) to {x_i-exponent: coeff}.
    Within a block the quotient follows the recursion q[a-1] = c[a] + q[a];
    the leftover constant is the remainder test.  Linear in the term count.
    """
    for (rest, s), coeffs in groups.items():
        q_prev = Fraction(0)
        for a in range(s, 0, -1):
            c = coeffs.get(a)
            if c is not None:
                q_prev = q_prev + c
            if q_prev:
                key = _rebuild_exponents(rest, i, j, a - 1, s - a)
                acc = out.get(key)
                acc = q_prev * factor if acc is None else acc + q_prev * factor
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        if q_prev + coeffs.get(0, Fraction(0)):
            raise DivisibilityError("not divisible by the coordinate difference")


def synthetic_divide_square(
    groups: dict[tuple, dict[int, Fraction]],
    i: int,
    j: int,
    out: dict[Exponents, Fraction],
    factor: Fraction = Fraction(1),
) -> None:
    """Divide grouped numerator data by ``x_i^2 - x_j^2``; stride-2 recursion.

    ``groups`` is keyed by (rest-exponents, pair-degree s, parity of the
    x_i exponent); parity classes divide independently.
    """
    for (rest, s, parity), coeffs in groups.items():
        a = s if s % 2 == parity % 2 else s - 1
        q_prev = Fraction(0)
        while a >= 2:
            c = coeffs.get(a)
            if c is not None:
                q_prev = q_prev + c
            if q_prev:
                key = _rebuild_exponents(rest, i, j, a - 2, s - a)
                acc = out.get(key)
                acc = q_prev * factor if acc is None else acc + q_prev * factor
                if acc:
                    out[key] = acc
                else:
                    del out[key]
            a -= 2
        if q_prev + coeffs.get(a, Fraction(0)):
            raise DivisibilityError("not divisible by the difference of squared coordinates")


def divide_linear_difference(p: Poly, i: int, j: int) -> Poly:
    """Exact quotient ``p / (x_i - x_j)``, or :class:`DivisibilityError`."""
    if i == j:
        raise ValueError("pair indices must differ")
    out: dict[Exponents, Fraction] = {}
    synthetic_divide_linear(_difference_groups(p, i, j), i, j, out)
    return Poly._raw(p.num_vars, out)


def divide_square_difference(p: Poly, i: int, j: int) -> Poly:
    """Exact quotient ``p / (x_i^2 - x_j^2)``, or :class:`DivisibilityError`."""
    if i == j:
        raise ValueError("pair indices must differ")
    groups: dict[tuple, dict[int, Fraction]] = {}
    for (rest, s), coeffs in _difference_groups(p, i, j).items():
        for a, c in coeffs.items():
            groups.setdefault((rest, s, a % 2), {})[a] = c
    out: dict[Exponents, Fraction] = {}
    synthetic_divide_square(groups, i, j, out)
    return Poly._raw(p.num_vars, out)


def divide_variable(p: Poly, i: int) -> Poly:
    """Exact quotient ``p / x_i``."""
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in p.terms.items():
        if exps[i] == 0:
            raise DivisibilityError(f"term {exps} has no factor x{i + 1}")
        out[exps[:i] + (exps[i] - 1,) + exps[i + 1:]] = coeff
    return Poly._raw(p.num_vars, out)


# -- symmetric polynomial bases ------------------------------------------------


def partitions(total: int, max_parts: int, max_value: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of ``total`` into at most ``max_parts`` parts, descending lex order."""
    if total < 0 or max_parts < 0:
        return []
    if total == 0:
        return [()]
    if max_parts == 0:
        return []
    first_cap = total if max_value is None else min(total, max_value)
    result = []
    for first in range(first_cap, 0, -1):
        for tail in partitions(total - first, max_parts - 1, first):
            result.append((first,) + tail)
    return result


def monomial_symmetric(num_vars: int, partition: Sequence[int]) -> Poly:
    """Monomial symmetric polynomial: the orbit sum of x^partition, each term once."""
    parts = tuple(sorted((q for q in partition if q), reverse=True))
    if len(parts) > num_vars:
        raise ValueError(
            f"partition {tuple(partition)} has more parts than variables ({num_vars})"
        )
    padded = parts + (0,) * (num_vars - len(parts))
    exps = sorted(set(itertools.permutations(padded)))
    return Poly(num_vars, {e: Fraction(1) for e in exps})


def sym_basis(num_vars: int, degree: int) -> list[Poly]:
    """Monomial-symmetric basis of the degree-``degree`` symmetric subspace."""
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    if degree < 0:
        return []
    return [monomial_symmetric(num_vars, lam) for lam in partitions(degree, num_vars)]


def even_sym_basis(num_vars: int, degree: int) -> list[Poly]:
    """Symmetric polynomials even in each variable: doubled partitions of degree/2."""
    if degree % 2 != 0 or degree < 0:
        return []
    return [
        monomial_symmetric(num_vars, tuple(2 * q for q in lam))
        for lam in partitions(degree // 2, num_vars)
    ]


# -- exact linear algebra ------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "ExactMatrix":
        data = tuple(tuple(_as_scalar(v) for v in row) for row in rows)
        n_rows = len(data)
        n_cols = len(data[0]) if data else 0
        if any(len(row) != n_cols for row in data):
            raise DimensionMismatch("ragged rows")
        return cls(n_rows, n_cols, data)

    def multiply_vector(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector length {len(v)}, expected {self.cols}")
        return [sum((r * x for r, x in zip(row, v)), Fraction(0)) for row in self.entries]

    def rank(self) -> int:
        _, pivot_cols = _bareiss_echelon(self)
        return len(pivot_cols)


def _bareiss_echelon(m: ExactMatrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Rows are first scaled to integers (clearing denominators leaves the row
    space unchanged); Bareiss' pivoting condensation keeps every intermediate
    value an exact integer and bounds coefficient growth.
    """
    a: list[list[int]] = []
    for row in m.entries:
        denom_lcm = 1
        for v in row:
            denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
        a.append([int(v * denom_lcm) for v in row])
    n_rows, n_cols = m.rows, m.cols
    pivot_cols: list[int] = []
    r = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((k for k in range(r, n_rows) if a[k][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for k in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                a[k][j] = (a[k][j] * a[r][c] - a[k][c] * a[r][j]) // prev
            a[k][c] = 0
        prev = a[r][c]
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivot_cols


def nullspace(m: ExactMatrix) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right kernel, one vector per free column.

    Each vector is normalized so that its first nonzero entry is 1; together
    they are in reduced form (vector k has 1 in its own free column and 0 in
    the other free columns).
    """
    if m.cols == 0:
        return []
    echelon, pivot_cols = _bareiss_echelon(m)
    free_cols = [c for c in range(m.cols) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for r in range(len(pivot_cols) - 1, -1, -1):
            pc = pivot_cols[r]
            if pc > free:
                continue
            s = sum((Fraction(echelon[r][j]) * v[j] for j in range(pc + 1, m.cols)), Fraction(0))
            v[pc] = -s / echelon[r][pc]
        lead = next(x for x in v if x)
        basis.append(tuple(x / lead for x in v))
    return basis
