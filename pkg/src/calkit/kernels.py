"""Kernel polynomials of the raising operators, by exact linear algebra.

The raising operator maps the degree-m symmetric subspace into the degree-
(m-2) one; its kernel elements seed the radial towers and the coherent
series.  Dimensions are computed, never asserted from a closed formula, and
every basis element is re-verified by direct operator application,
independently of the elimination path that produced it.

For the reflection family the working space is restricted to polynomials
even in each variable (odd degrees are empty), which is what the one-body
``d_i / x_i`` term requires for exact divisibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactcore import ExactMatrix, Poly, even_sym_basis, nullspace, sym_basis
from .operators import Model, ModelParams, apply_raising


def _degree_basis(params: ModelParams, m: int) -> list[Poly]:
    if params.model is Model.AN:
        return sym_basis(params.n, m)
    return even_sym_basis(params.n, m)


@dataclass(frozen=True)
class KernelBasis:
    params: ModelParams
    m: int
    basis: tuple[Poly, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def raising_matrix(params: ModelParams, m: int) -> ExactMatrix:
    """Matrix of the raising operator from degree m to degree m-2.

    Columns are indexed by the monomial-symmetric basis of degree ``m``
    (even-per-variable for the reflection family), rows by the degree-(m-2)
    basis.  A symmetric polynomial's coordinates in the monomial-symmetric
    basis are just its coefficients at the partition exponents, so no solve
    is needed for the row expansion.
    """
    domain = _degree_basis(params, m)
    codomain = _degree_basis(params, m - 2) if m >= 2 else []
    columns = []
    for q in domain:
        image = apply_raising(params, q)
        coords = []
        for b in codomain:
            lead_exps, lead_coeff = b.leading_term()
            coords.append(image.coefficient(lead_exps) / lead_coeff)
        columns.append(coords)
        # every image term must be accounted for by the codomain basis
        recombined = Poly.zero(params.n)
        for c, b in zip(coords, codomain):
            recombined = recombined + b * c
        if recombined != image:
            raise AssertionError("raising-operator image left the symmetric subspace")
    rows = tuple(
        tuple(columns[c][r] for c in range(len(domain)))
        for r in range(len(codomain))
    )
    return ExactMatrix(rows=len(codomain), cols=len(domain), entries=rows)


def kernel_basis(params: ModelParams, m: int) -> KernelBasis:
    """Exact basis of the degree-m kernel of the raising operator.

    Basis polynomials are normalized to leading coefficient 1 (graded-lex)
    and re-verified by applying the operator to each element.
    """
    domain = _degree_basis(params, m)
    if not domain:
        return KernelBasis(params, m, ())
    matrix = raising_matrix(params, m)
    vectors = nullspace(matrix)
    elements = []
    for v in vectors:
        p = Poly.zero(params.n)
        for coeff, b in zip(v, domain):
            p = p + b * coeff
        _, lead = p.leading_term()
        p = p * (1 / lead)
        if not apply_raising(params, p).is_zero():
            raise AssertionError("kernel candidate not annihilated by the raising operator")
        elements.append(p)
    return KernelBasis(params, m, tuple(elements))


def kernel_dimensions(params: ModelParams, max_degree: int) -> dict[int, int]:
    """Kernel dimension for each degree up to ``max_degree``."""
    return {m: kernel_basis(params, m).dimension for m in range(max_degree + 1)}
