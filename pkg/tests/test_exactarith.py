"""Exact-arithmetic substrate tests.

The independent oracle here is a tiny complex-rational evaluator built on
fractions.Fraction: every structural operation (add/mul/diff/substitute) is
cross-checked by evaluating both sides at random rational points for the
generators.  Nothing in the oracle touches the module's own arithmetic.
"""
import random
from fractions import Fraction

import pytest

from transeig.exactarith import (GaussianRational, Generator, MultiPoly,
                                 SymbolExpr, divide_by_rho_monomial, g_h,
                                 g_n, g_psi, g_qf, g_qs, g_r, g_z,
                                 partial_derivative, ring_ops,
                                 substitute_zero)


# ---------------------------------------------------------------------------
# oracle: exact complex-rational arithmetic independent of GaussianRational

class CF:
    """Complex number with Fraction parts (oracle only)."""

    def __init__(self, re=0, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    def __add__(self, o):
        return CF(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return CF(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return CF(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    def __pow__(self, k):
        out = CF(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        return self.re == o.re and self.im == o.im

    def __repr__(self):
        return f"CF({self.re}, {self.im})"


def eval_poly(p: MultiPoly, env) -> CF:
    total = CF(0)
    for mono, c in p.terms.items():
        term = CF(c.re, c.im)
        for gen, e in mono:
            term = term * env[gen] ** e
        total = total + term
    return total


def eval_symbol(s: SymbolExpr, env, rho_val: CF) -> CF:
    # Laurent powers of rho: negative exponents via exact inversion
    def rho_pow(d):
        if d >= 0:
            return rho_val ** d
        denom = rho_val ** (-d)
        scale = denom.re * denom.re + denom.im * denom.im
        return CF(denom.re / scale, -denom.im / scale)

    total = CF(0)
    for d, p in s.coef.items():
        total = total + eval_poly(p, env) * rho_pow(d)
    return total


def random_env(rng):
    gens = [g_z(), g_h(), g_psi(), g_n(1), g_n(2), g_r(1), g_r(2),
            g_qs(0), g_qs(1), g_qf(0), g_qf(1)]
    return {g: CF(Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
                  Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
            for g in gens}


def random_symbol(rng, n_terms=6):
    gens = [g_z(), g_h(), g_psi(), g_n(1), g_r(1), g_qs(0), g_qf(1)]
    out = SymbolExpr.zero()
    for _ in range(n_terms):
        c = GaussianRational(Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
                             Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        term = SymbolExpr.constant(c)
        for _ in range(rng.randint(0, 3)):
            term = term * SymbolExpr.generator(rng.choice(gens))
        term = term * SymbolExpr.rho(rng.randint(-3, 3))
        out = out + term
    return out


# ---------------------------------------------------------------------------
# generators

def test_generator_tags():
    assert g_z().name == "z"
    assert g_n(2).name == "n2"
    assert g_qf(0).name == "qf0"
    with pytest.raises(ValueError):
        Generator("z", 1)          # plain tag with an index
    with pytest.raises(ValueError):
        Generator("n")             # indexed tag without one
    with pytest.raises(ValueError):
        Generator("n", -1)
    with pytest.raises(ValueError):
        Generator("bogus")


def test_generator_ordering_and_identity():
    assert g_n(1) == g_n(1) and g_n(1) != g_r(1)
    assert sorted([g_r(2), g_n(3), g_h()]) == [g_h(), g_n(3), g_r(2)]
    assert len({g_z(), g_z(), g_qs(1)}) == 2
    with pytest.raises(AttributeError):
        g_z().tag = "h"


# ---------------------------------------------------------------------------
# Gaussian rationals

def test_scalar_field_ops():
    a = GaussianRational(Fraction(3, 4), Fraction(-1, 2))
    b = GaussianRational(2, 5)
    assert a + b == GaussianRational(Fraction(11, 4), Fraction(9, 2))
    assert a * b == GaussianRational(Fraction(3, 2) + Fraction(5, 2),
                                     Fraction(15, 4) - 1)
    # division is exact multiplication by the conjugate over |b|^2
    assert (a / b) * b == a
    assert a ** 0 == GaussianRational(1)
    assert a ** 3 == a * a * a
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1)
    with pytest.raises(ZeroDivisionError):
        a / GaussianRational(0)


def test_scalar_matches_oracle():
    rng = random.Random(20250611)
    for _ in range(200):
        a = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        b = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        ca, cb = CF(a.re, a.im), CF(b.re, b.im)
        s = a + b
        assert CF(s.re, s.im) == ca + cb
        p = a * b
        assert CF(p.re, p.im) == ca * cb


def test_scalar_str_roundtrippable_form():
    assert str(GaussianRational(Fraction(1, 4))) == "1/4+0*i"
    assert str(GaussianRational(0, Fraction(-3, 8))) == "0-3/8*i"


# ---------------------------------------------------------------------------
# multivariate layer

def test_poly_ring_laws_against_oracle():
    rng = random.Random(42)
    for _ in range(40):
        a, b, c = (random_symbol(rng) for _ in range(3))
        env = random_env(rng)
        rho_val = CF(Fraction(rng.randint(1, 9), rng.randint(1, 5)),
                     Fraction(rng.randint(1, 9), rng.randint(1, 5)))
        lhs = (a + b) * c
        rhs = a * c + b * c
        assert lhs == rhs
        assert eval_symbol(lhs, env, rho_val) == \
            eval_symbol(a, env, rho_val) * eval_symbol(c, env, rho_val) + \
            eval_symbol(b, env, rho_val) * eval_symbol(c, env, rho_val)
        assert a * b == b * a
        assert (a - a).is_zero()


def test_named_ring_entry_points():
    rng = random.Random(3)
    a, b = random_symbol(rng), random_symbol(rng)
    assert ring_ops(a, b, "add") == a + b
    assert ring_ops(a, b, "sub") == a - b
    assert ring_ops(a, b, "mul") == a * b
    assert ring_ops(a, None, "neg") == -a
    with pytest.raises(ValueError):
        ring_ops(a, b, "div")


def test_derivative_product_rule():
    rng = random.Random(99)
    for gen in (g_z(), g_n(1), g_qf(1)):
        for _ in range(20):
            a, b = random_symbol(rng), random_symbol(rng)
            assert (a * b).diff(gen) == a.diff(gen) * b + a * b.diff(gen)
            assert partial_derivative(a + b, gen) == a.diff(gen) + b.diff(gen)


def test_derivative_matches_difference_quotient():
    # d/dz of a polynomial, checked exactly: p(z+t) - p(z) == t * dp/dz + O(t^2)
    # with the O(t^2) part extracted by a second substitution point.
    z = SymbolExpr.generator(g_z())
    psi = SymbolExpr.generator(g_psi())
    p = z * z * psi + z * SymbolExpr.rho(-2)
    dp = p.diff(g_z())
    expected = (z * psi).scale(2) + SymbolExpr.rho(-2)
    assert dp == expected
    # generators the expression does not contain differentiate to zero
    assert p.diff(g_n(5)).is_zero()


def test_substitutions():
    rng = random.Random(5)
    a = random_symbol(rng)
    wiped = substitute_zero(a, [g_z(), g_n(1)])
    assert not wiped.contains(g_z()) and not wiped.contains(g_n(1))
    env = random_env(rng)
    env_zero = dict(env)
    env_zero[g_z()] = CF(0)
    env_zero[g_n(1)] = CF(0)
    rho_val = CF(Fraction(2, 3), Fraction(1, 2))
    assert eval_symbol(wiped, env, rho_val) == eval_symbol(a, env_zero, rho_val)
    ones = a.subs_one([g_psi()])
    env_one = dict(env)
    env_one[g_psi()] = CF(1)
    assert eval_symbol(ones, env_one, rho_val) == eval_symbol(a, env_one, rho_val)
    assert not ones.contains(g_psi())


# ---------------------------------------------------------------------------
# Laurent structure

def test_rho_monomial_division_is_exact_inverse():
    rng = random.Random(17)
    for _ in range(30):
        a = random_symbol(rng)
        c = GaussianRational(Fraction(rng.randint(1, 7)),
                             Fraction(rng.randint(-7, 7)))
        d = rng.randint(-2, 3)
        q = divide_by_rho_monomial(a, c, d)
        assert q.scale(c) * SymbolExpr.rho(d) == a
    with pytest.raises(ZeroDivisionError):
        divide_by_rho_monomial(SymbolExpr.rho(1), 0, 1)


def test_order_bookkeeping():
    a = SymbolExpr.rho(-3) + SymbolExpr.rho(2).scale(5)
    assert a.min_order() == -3 and a.max_order() == 2
    assert SymbolExpr.zero().min_order() is None
    assert a.rho_coefficient(2) == MultiPoly.constant(5)
    assert a.rho_coefficient(7).is_zero()
    # exponent arithmetic across multiplication
    b = a * SymbolExpr.rho(-1)
    assert b.min_order() == -4 and b.max_order() == 1


def test_mixed_variable_arithmetic_rejected():
    a = SymbolExpr.rho(1, var="rho")
    b = SymbolExpr.rho(1, var="rho_t")
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a * b
    assert a.rename_var("rho_t") + b == b.scale(2)


def test_text_form_deterministic():
    rng = random.Random(8)
    a = random_symbol(rng, n_terms=12)
    texts = {a.to_text() for _ in range(5)}
    assert len(texts) == 1
    # rebuilt term-by-term in shuffled order, the text must not change
    pieces = [(d, MultiPoly({m: c})) for d, p in a.coef.items()
              for m, c in p.terms.items()]
    rng.shuffle(pieces)
    rebuilt = SymbolExpr.zero()
    for d, p in pieces:
        rebuilt = rebuilt + SymbolExpr({d: p})
    assert rebuilt == a and rebuilt.to_text() == a.to_text()
    assert SymbolExpr.zero().to_text() == "0"


def test_immutability():
    a = SymbolExpr.rho(1)
    with pytest.raises(AttributeError):
        a.coef = {}
    p = MultiPoly.constant(1)
    with pytest.raises(AttributeError):
        p.terms = {}
