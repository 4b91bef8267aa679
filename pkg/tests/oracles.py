"""Independent oracles used only by the tests.

The raising operators are recomputed here with sympy's rational-function
arithmetic (explicit 1/(x_i - x_j) terms followed by cancel), a completely
different path from the package's divided-difference implementation.
"""

from fractions import Fraction

import sympy as sp

from calkit.exactcore import Poly
from calkit.operators import Model, ModelParams


def _symbols(n: int):
    return sp.symbols(f"x1:{n + 1}")


def poly_to_sympy(p: Poly):
    xs = _symbols(p.num_vars)
    expr = sp.Integer(0)
    for exps, coeff in p.terms.items():
        term = sp.Rational(coeff.numerator, coeff.denominator)
        for x, e in zip(xs, exps):
            if e:
                term *= x**e
        expr += term
    return expr


def sympy_to_poly(expr, n: int) -> Poly:
    xs = _symbols(n)
    expr = sp.expand(expr)
    spoly = sp.Poly(expr, *xs, domain="QQ")
    terms = {}
    for monom, coeff in spoly.terms():
        q = sp.Rational(coeff)
        terms[tuple(int(e) for e in monom)] = Fraction(int(q.p), int(q.q))
    return Poly(n, terms)


def raising_oracle(params: ModelParams, p: Poly) -> Poly:
    """The generalized Laplacian via sympy rational functions and cancel()."""
    n = params.n
    xs = _symbols(n)
    expr = poly_to_sympy(p)
    out = sp.Rational(1, 2) * sum(sp.diff(expr, x, 2) for x in xs)
    if params.model is Model.AN:
        a = sp.Rational(params.alpha.numerator, params.alpha.denominator)
        for i in range(n):
            for j in range(n):
                if i != j:
                    out += a * sp.diff(expr, xs[i]) / (xs[i] - xs[j])
    else:
        lam = sp.Rational(params.lam.numerator, params.lam.denominator)
        lam1 = sp.Rational(params.lam1.numerator, params.lam1.denominator)
        pair = 2 * lam if params.pair_doubled else lam
        for i in range(n):
            for j in range(i + 1, n):
                num = xs[i] * sp.diff(expr, xs[i]) - xs[j] * sp.diff(expr, xs[j])
                out += pair * num / (xs[i] ** 2 - xs[j] ** 2)
        for i in range(n):
            out += lam1 * sp.diff(expr, xs[i]) / xs[i]
    folded = sp.cancel(sp.together(out))
    numerator, denominator = sp.fraction(folded)
    if not denominator.is_number:
        raise AssertionError(f"oracle result is not a polynomial: {folded}")
    return sympy_to_poly(numerator / denominator, n)
