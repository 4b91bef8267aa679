import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calkit.exactcore import (
    DimensionMismatch,
    DivisibilityError,
    ExactMatrix,
    Poly,
    divide_linear_difference,
    divide_square_difference,
    divide_variable,
    euler_apply,
    even_sym_basis,
    exact_divide,
    is_symmetric,
    monomial_symmetric,
    nullspace,
    partitions,
    sym_basis,
)

x1 = Poly.variable(2, 0)
x2 = Poly.variable(2, 1)


# -- arithmetic ------------------------------------------------------------


def test_add_cancellation():
    assert (x1 + x2) + (x1 - x2) == x1 * 2


def test_mul_annihilator():
    p = x1 * x2 + Poly.const(2, 3)
    assert p * Poly.zero(2) == Poly.zero(2)
    assert p * 0 == Poly.zero(2)


def test_difference_of_squares():
    assert (x1 + x2) * (x1 - x2) == x1**2 - x2**2


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        x1 + Poly.variable(3, 0)


def test_scalar_operations():
    p = x1 + 1
    assert p - 1 == x1
    assert p * Fraction(1, 2) == x1 * Fraction(1, 2) + Fraction(1, 2)


def test_zero_coefficients_never_stored():
    p = x1 - x1
    assert p.is_zero() and len(p) == 0
    q = Poly(2, {(1, 0): Fraction(0)})
    assert q.is_zero()


def test_power():
    assert (x1 + x2) ** 0 == Poly.const(2, 1)
    assert (x1 + x2) ** 3 == (x1 + x2) * (x1 + x2) * (x1 + x2)


def test_leading_term_graded_lex():
    p = x1 * x2 + x1**2 + x2**3
    exps, coeff = p.leading_term()
    assert exps == (0, 3) and coeff == 1  # degree wins first
    q = x1 * x2 + x1**2
    assert q.leading_term()[0] == (2, 0)  # lex breaks the degree tie


# -- differentiation -------------------------------------------------------


def test_diff_power_rule():
    assert (x1**2 * x2).diff(0) == 2 * x1 * x2


def test_diff_constant_in_other_variable():
    assert (x1**3).diff(1) == Poly.zero(2)


def test_diff_expanded_chain_rule():
    assert ((x1 + x2) ** 2).diff(0) == 2 * (x1 + x2)


def test_diff_index_out_of_range():
    with pytest.raises(IndexError):
        x1.diff(2)


def test_euler_identity_on_homogeneous():
    rng = random.Random(7)
    for _ in range(20):
        degree = rng.randint(0, 5)
        terms = {}
        for _ in range(4):
            cut = rng.randint(0, degree)
            terms[(cut, degree - cut)] = Fraction(rng.randint(-5, 5))
        p = Poly(2, terms)
        assert euler_apply(p) == p * degree


# -- exact division ----------------------------------------------------------


def test_exact_divide_factorization():
    assert exact_divide(x1**2 - x2**2, x1 - x2) == x1 + x2


def test_exact_divide_common_factor():
    assert exact_divide(x1**2 * x2 - x1 * x2**2, x1 - x2) == x1 * x2


def test_exact_divide_not_divisible():
    with pytest.raises(DivisibilityError):
        exact_divide(x1 + x2, x1 - x2)


def test_exact_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_divide(x1, Poly.zero(2))


@st.composite
def polys(draw, num_vars=2, max_degree=4, max_terms=5):
    n_terms = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n_terms):
        exps = tuple(
            draw(st.integers(0, max_degree)) for _ in range(num_vars)
        )
        coeff = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 4)))
        terms[exps] = coeff
    return Poly(num_vars, terms)


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_divide_inverts_multiplication(p, q):
    if q.is_zero():
        return
    assert exact_divide(p * q, q) == p


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_degree_additivity(p, q):
    if p.is_zero() or q.is_zero():
        return
    assert (p * q).degree() == p.degree() + q.degree()


@given(polys())
@settings(max_examples=40, deadline=None)
def test_linear_difference_division_matches_generic(p):
    divisor = x1 - x2
    product = p * divisor
    assert divide_linear_difference(product, 0, 1) == p
    assert divide_linear_difference(product, 0, 1) == exact_divide(product, divisor)


@given(polys())
@settings(max_examples=40, deadline=None)
def test_square_difference_division_matches_generic(p):
    divisor = x1**2 - x2**2
    product = p * divisor
    assert divide_square_difference(product, 0, 1) == p
    assert divide_square_difference(product, 0, 1) == exact_divide(product, divisor)


def test_pair_division_rejects_nonmultiple():
    with pytest.raises(DivisibilityError):
        divide_linear_difference(x1, 0, 1)
    with pytest.raises(DivisibilityError):
        divide_square_difference(x1 * x2, 0, 1)


def test_divide_variable():
    assert divide_variable(x1**2 * x2, 0) == x1 * x2
    with pytest.raises(DivisibilityError):
        divide_variable(x1 + x2, 0)


def test_swapped_index_order():
    product = (x1 - x2) * (x1 + 3 * x2)
    assert divide_linear_difference(product, 0, 1) == x1 + 3 * x2
    assert divide_linear_difference(-product, 1, 0) == x1 + 3 * x2


# -- symmetric bases -----------------------------------------------------------


def test_partitions_order_and_count():
    assert partitions(2, 2) == [(2,), (1, 1)]
    assert partitions(3, 2) == [(3,), (2, 1)]
    assert partitions(4, 8)[0] == (4,)


def test_sym_basis_counts():
    assert len(sym_basis(2, 2)) == 2
    assert len(sym_basis(3, 1)) == 1
    assert len(sym_basis(2, 3)) == 2


def test_sym_basis_content():
    m2, m11 = sym_basis(2, 2)
    assert m2 == x1**2 + x2**2
    assert m11 == x1 * x2


def test_sym_basis_elements_symmetric_homogeneous():
    for n in (2, 3, 4):
        for m in range(5):
            for p in sym_basis(n, m):
                assert is_symmetric(p)
                assert p.is_homogeneous() and p.degree() == m


def test_even_sym_basis():
    assert even_sym_basis(2, 3) == []
    basis = even_sym_basis(2, 4)
    assert len(basis) == 2
    for p in basis:
        assert all(e % 2 == 0 for exps in p.terms for e in exps)


def test_monomial_symmetric_too_many_parts():
    with pytest.raises(ValueError):
        monomial_symmetric(2, (1, 1, 1))


def test_is_symmetric_examples():
    assert is_symmetric(x1 + x2)
    assert not is_symmetric(x1 - x2)
    assert is_symmetric(x1 * x2 * (x1 + x2))


# -- evaluation ------------------------------------------------------------------


def test_exact_evaluation():
    p = x1**2 + 3 * x1 * x2
    assert p.evaluate([Fraction(1, 2), Fraction(2)]) == Fraction(1, 4) + 3


def test_homogeneous_components():
    p = x1**2 + x1 + 1
    parts = p.homogeneous_components()
    assert sorted(parts) == [0, 1, 2]
    assert parts[2] == x1**2


# -- exact linear algebra -----------------------------------------------------------


def test_nullspace_full_rank():
    m = ExactMatrix.from_rows([[1, 0], [0, 1]])
    assert nullspace(m) == []


def test_nullspace_zero_matrix():
    m = ExactMatrix.from_rows([[0, 0], [0, 0]])
    basis = nullspace(m)
    assert len(basis) == 2
    assert basis[0] == (1, 0) and basis[1] == (0, 1)


def test_nullspace_rank_one():
    m = ExactMatrix.from_rows([[1, 1], [2, 2]])
    assert nullspace(m) == [(Fraction(1), Fraction(-1))]


def test_nullspace_rational_entries():
    m = ExactMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3), 0], [0, 1, 1]])
    for v in nullspace(m):
        assert all(entry == 0 for entry in m.multiply_vector(list(v)))


def test_nullspace_rank_nullity_random():
    rng = random.Random(11)
    for _ in range(25):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = ExactMatrix.from_rows(
            [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
             for _ in range(rows)]
        )
        basis = nullspace(m)
        assert len(basis) + m.rank() == cols
        for v in basis:
            assert all(entry == 0 for entry in m.multiply_vector(list(v)))
            lead = next(entry for entry in v if entry)
            assert lead == 1


def test_nullspace_against_sympy():
    import sympy as sp

    rng = random.Random(13)
    for _ in range(10):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        data = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
        mine = nullspace(ExactMatrix.from_rows(data))
        theirs = sp.Matrix(data).nullspace()
        assert len(mine) == len(theirs)
        span = sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in v] for v in mine])
        for vec in theirs:
            augmented = span.T.row_join(vec)
            assert augmented.rank() == span.rank()  # same span
