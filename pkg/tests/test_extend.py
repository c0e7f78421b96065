import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import is_squarefree, structured_poly
from valx import INF, BaseField, LimitDetected, Poly, extensions, gauss, oracle_extension_count, parse_poly
from valx.extend import default_stage_bound

X = sympy.Symbol("x")


def P(s, K):
    return parse_poly(s, K)


def _sympy(f: Poly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)], X)


def _vp_resultant(phi: Poly, g: Poly, p: int):
    r = sympy.resultant(_sympy(phi), _sympy(g), X)
    if r == 0:
        return INF
    r = sympy.Rational(r)
    return F(int(sympy.multiplicity(p, r.p) - sympy.multiplicity(p, r.q)))


@pytest.mark.parametrize(
    "p, phi, shape",
    [
        (5, "x^2+1", [(1, 1), (1, 1)]),
        (2, "x^2-2", [(2, 1)]),
        (2, "x^2+x+1", [(1, 2)]),
        (3, "x^2+1", [(1, 2)]),
        (7, "x-3", [(1, 1)]),
        (2, "x^4+2*x+2", [(4, 1)]),
    ],
)
def test_named_extensions(p, phi, shape):
    K = BaseField.qp(p)
    rep = extensions(K, P(phi, K))
    assert sorted((b.e, b.f) for b in rep.branches) == sorted(shape)
    assert rep.ok and rep.sum_ef == P(phi, K).degree


def test_v5_first_keys():
    K = BaseField.qp(5)
    keys = sorted(b.chain.stages[0][0].format() for b in extensions(K, P("x^2+1", K)).branches)
    assert keys == ["x - 2", "x - 3"]


def test_v2_xsquared_minus_two_chain():
    K = BaseField.qp(2)
    (b,) = extensions(K, P("x^2-2", K)).branches
    assert b.chain.stages[0] == (P("x", K), F(1, 2))
    assert b.exact and b.chain.gamma_top is INF


def test_approximant_examples():
    K = BaseField.qp(2)
    (b,) = extensions(K, P("x^2-2", K)).branches
    a = b.approximant(2)
    assert a.stages == [(P("x", K), F(1, 2)), (P("x^2-2", K), F(2))]
    K5 = BaseField.qp(5)
    for b in extensions(K5, P("x^2+1", K5)).branches:
        a = b.approximant(3)
        psi, g = a.stages[-1]
        assert g == 3 and psi.degree == 1
        root = -psi[0]
        # the Hensel root modulo 5^3: root^2 + 1 vanishes to order 3
        assert K5.nu(root * root + 1) >= 3
        assert b.value(psi) >= 3


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_fundamental_identity_and_oracle(seed):
    rng = random.Random(seed)
    K = BaseField.qp(rng.choice([2, 3, 5, 7]))
    f = structured_poly(rng, K, 6)
    if not is_squarefree(f):
        return
    rep = extensions(K, f)
    assert rep.sum_ef == f.degree and rep.ok
    assert len(rep.branches) == oracle_extension_count(K, f)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_branch_values_sum_to_norm(seed):
    # sum over the conjugates of nu(g(root)) is the valuation of the resultant
    rng = random.Random(seed)
    K = BaseField.qp(rng.choice([2, 3, 5]))
    f = structured_poly(rng, K, 6)
    if not is_squarefree(f):
        return
    rep = extensions(K, f)
    for _ in range(5):
        g = Poly(K, [rng.randint(-30, 30) * K.p ** rng.randint(0, 4) for _ in range(rng.randint(1, 6))] + [1])
        want = _vp_resultant(f, g, K.p)
        vals = [b.value(g) for b in rep.branches]
        got = INF if any(v is INF for v in vals) else sum(b.degree * v for b, v in zip(rep.branches, vals))
        assert got == want


@pytest.mark.parametrize("p", [2, 3, 5])
def test_branches_vanish_on_their_factor(p):
    K = BaseField.qp(p)
    f = P(f"(x^2-{p})*(x^2+x+1)*(x-{p}^3)", K)
    rep = extensions(K, f)
    for b in rep.branches:
        assert b.value(f) is INF
        assert b.value(b.key) >= b.key_value if b.key_value is not INF else True


def test_approximant_stage_shape():
    K = BaseField.qp(2)
    f = P("((x^2-2)^2+4*x)^2 + 2^6*x", K)
    for b in extensions(K, f).branches:
        st_ = b.approximant(F(100)).stages
        degs = [phi.degree for phi, _ in st_]
        gs = [g for _, g in st_]
        assert degs == sorted(degs)
        assert all(a < c for a, c in zip(gs, gs[1:]))
        below = b.approximant(F(100)).truncate(len(st_) - 1)
        assert below.is_key(st_[-1][0])


def test_same_valuation_stable_under_perturbation():
    K = BaseField.qp(3)
    for b in extensions(K, P("x^3 - 3*x + 6", K)).branches:
        a = b.approximant(F(10))
        psi, g = a.stages[-1]
        h = Poly(K, [K.pi_power(12)])
        assert a.same_valuation(psi + h)


def test_function_field_extensions():
    for K, s, shape in [
        (BaseField.fpt(2), "x^2 + t", [(2, 1)]),
        (BaseField.fpt(2), "x^2 + x + 1/t", [(2, 1)]),
        (BaseField.fpt(3), "x^3 - t", [(3, 1)]),
        (BaseField.fpt(3), "x^2 + t + 1", [(1, 2)]),
        (BaseField.qt(), "x^2 - t", [(2, 1)]),
        (BaseField.qt(), "x^2 - 1 - t", [(1, 1), (1, 1)]),
        (BaseField.qt(), "x^4 + t^3 + 1", [(1, 4)]),
    ]:
        rep = extensions(K, P(s, K))
        assert sorted((b.e, b.f) for b in rep.branches) == sorted(shape), s
        assert rep.ok


def test_input_checks():
    K = BaseField.qp(5)
    with pytest.raises(ValueError):
        extensions(K, P("x^2+2*x+1", K))
    with pytest.raises(ValueError):
        extensions(K, P("2*x^2+1", K))
    with pytest.raises(ValueError):
        extensions(K, P("3", K))


def test_stage_bound_surfaces_limit(monkeypatch):
    K = BaseField.qp(2)
    f = P("((x^2-2)^2+4*x)^2 + 2^6*x", K)
    rep = extensions(K, f, stage_bound=1)
    assert any(b.limit for b in rep.branches)
    assert not rep.ok
    lim = next(b for b in rep.branches if b.limit)
    with pytest.raises(LimitDetected):
        lim.value(P("x", K))
    monkeypatch.setenv("VALX_STAGE_BOUND", "1")
    assert default_stage_bound() == 1
    assert not extensions(K, f).ok
    monkeypatch.setenv("VALX_STAGE_BOUND", "zero")
    with pytest.raises(ValueError):
        default_stage_bound()


def test_json_shape():
    K = BaseField.qp(5)
    js = extensions(K, P("x^2+1", K)).to_json()
    assert js["sum_ef"] == 2 and js["ok"] is True
    assert [set(b) >= {"stages", "e", "f"} for b in js["branches"]] == [True, True]
