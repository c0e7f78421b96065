from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from valx import INF, BaseField, Poly, newton_polygon, parse_poly, phi_expansion, separable_decompose
from valx.poly import recompose, taylor_coefficients

Q = BaseField.qp(5)
X = sympy.Symbol("x")

coeff = st.integers(-30, 30)
polys = st.lists(coeff, min_size=0, max_size=7).map(lambda cs: Poly(Q, cs))
monics = st.lists(coeff, min_size=1, max_size=4).map(lambda cs: Poly(Q, cs + [1]))


def to_sympy(f: Poly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)] or [0], X, domain="QQ")


def P(s, K=Q):
    return parse_poly(s, K)


def test_expansion_examples():
    assert phi_expansion(P("x^2+2*x+4"), P("x")) == [Poly(Q, [4]), Poly(Q, [2]), Poly(Q, [1])]
    # synthetic division by x - 2: 1 -> 4 -> 5 reading the Horner table upward
    assert phi_expansion(P("x^2+1"), P("x-2")) == [Poly(Q, [5]), Poly(Q, [4]), Poly(Q, [1])]
    phi = P("x^2+3*x+1")
    assert phi_expansion(phi, phi) == [Poly(Q, []), Poly(Q, [1])]
    with pytest.raises(ValueError):
        phi_expansion(P("x^2"), P("2*x+1"))


def test_arith_examples():
    assert P("x+1") * P("x-1") == P("x^2-1")
    assert divmod(P("x^2+1"), P("x-2")) == (P("x+2"), P("5"))
    assert P("x^2-1").gcd(P("x-1")) == P("x-1")
    with pytest.raises(ZeroDivisionError):
        divmod(P("x"), Poly(Q, []))


@given(polys, polys)
def test_arith_matches_sympy(f, g):
    assert to_sympy(f * g) == to_sympy(f) * to_sympy(g)
    assert to_sympy(f + g) == to_sympy(f) + to_sympy(g)
    if g:
        q, r = divmod(f, g)
        sq, sr = sympy.div(to_sympy(f), to_sympy(g))
        assert to_sympy(q) == sq and to_sympy(r) == sr
        if f:
            assert to_sympy(f.gcd(g)) == sympy.gcd(to_sympy(f), to_sympy(g)).monic()


@given(polys, st.integers(-9, 9))
def test_taylor_shift_matches_sympy(f, c):
    shifted = sympy.Poly(to_sympy(f).as_expr().subs(X, X + c), X, domain="QQ") if f else None
    got = Poly(Q, taylor_coefficients(f, F(c)))
    if f:
        assert to_sympy(got) == shifted


@given(polys, monics)
def test_recomposition(f, phi):
    exp = phi_expansion(f, phi)
    assert recompose(exp, phi) == f
    assert all(g.degree < phi.degree for g in exp)


def test_newton_polygon_examples():
    npg = newton_polygon([(0, F(1)), (1, F(0)), (2, F(0))])
    assert npg.slopes == ((F(-1), 1), (F(0), 1))
    assert newton_polygon([(0, F(0)), (1, F(0))]).slopes == ((F(0), 1),)
    assert newton_polygon([(0, F(1)), (2, F(0))]).slopes == ((F(-1, 2), 2),)
    inf = newton_polygon([(0, INF), (1, F(2)), (2, F(0))])
    assert inf.infinite == 1 and inf.root_valuation_multiset() == [INF, F(2)]
    with pytest.raises(ValueError):
        newton_polygon([])


roots = st.lists(st.builds(F, st.integers(-400, 400), st.integers(1, 30)), min_size=1, max_size=6)


@given(roots, st.sampled_from([2, 3, 5]))
def test_newton_polygon_root_valuations(rs, p):
    # oracle: the roots are known rationals, so their valuations are direct
    K = BaseField.qp(p)
    f = Poly(K, [1])
    for r in rs:
        f = f * Poly(K, [-r, 1])
    npg = newton_polygon([(j, K.nu(c)) for j, c in enumerate(f.coeffs)])
    assert npg.root_valuation_multiset() == sorted((K.nu(r) for r in rs), reverse=True)


@given(roots, roots)
def test_newton_polygon_of_product_merges(r1, r2):
    def build(rs):
        f = Poly(Q, [1])
        for r in rs:
            f = f * Poly(Q, [-r, 1])
        return f

    def mset(f):
        return newton_polygon([(j, Q.nu(c)) for j, c in enumerate(f.coeffs)]).root_valuation_multiset()

    f, g = build(r1), build(r2)
    assert mset(f * g) == sorted(mset(f) + mset(g), reverse=True)


def test_separable_decompose_examples():
    assert separable_decompose(P("x^3+x+1")) == (P("x^3+x+1"), 0)
    F2 = BaseField.fpt(2)
    sep, n = separable_decompose(P("x^2 + t", F2))
    assert (sep, n) == (P("x + t", F2), 1)
    F3 = BaseField.fpt(3)
    assert separable_decompose(P("x^3 - t", F3)) == (P("x - t", F3), 1)
    assert separable_decompose(P("x^9 + t*x^3 + 1", F3)) == (P("x^3 + t*x + 1", F3), 1)
    sep, n = separable_decompose(P("x^4 + t", F2))
    assert n == 2 and sep == P("x + t", F2)
    assert sep.gcd(sep.derivative()).degree == 0
