import random
from fractions import Fraction

import pytest

from calkit.exactcore import Poly, even_sym_basis, sym_basis
from calkit.operators import Model, ModelParams


def random_symmetric(rng: random.Random, params: ModelParams, max_degree: int = 6) -> Poly:
    """Seeded random (even-)symmetric polynomial with small rational coefficients."""
    if params.model is Model.AN:
        degrees = list(range(max_degree + 1))
        basis_of = lambda d: sym_basis(params.n, d)
    else:
        degrees = list(range(0, max_degree + 1, 2))
        basis_of = lambda d: even_sym_basis(params.n, d)
    while True:
        poly = Poly.zero(params.n)
        for _ in range(rng.randint(1, 3)):
            for b in basis_of(rng.choice(degrees)):
                poly = poly + b * Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        if not poly.is_zero():
            return poly


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture
def params_22():
    """The workhorse linear-family configuration: N=2, alpha=2, E=3."""
    return ModelParams.linear(2, Fraction(2))


@pytest.fixture
def params_bn11():
    """Reflection family N=2, lam=lam1=1, ground energy 5."""
    return ModelParams.reflection(2, Fraction(1), Fraction(1))
