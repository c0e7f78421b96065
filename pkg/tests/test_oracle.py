import random

import pytest
import sympy

from valx import BaseField, Poly, oracle_extension_count, parse_poly
from valx.residue import PrimeField, factor


def P(s, K):
    return parse_poly(s, K)


def test_oracle_examples():
    assert oracle_extension_count(BaseField.qp(5), P("x^2+1", BaseField.qp(5))) == 2
    assert oracle_extension_count(BaseField.qp(2), P("x^2-2", BaseField.qp(2))) == 1
    assert oracle_extension_count(BaseField.qp(3), P("x^2+1", BaseField.qp(3))) == 1


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_quadratic_residue_criterion(p):
    # x^2 - a for a unit a splits over Q_p iff a is a square mod p (p odd)
    K = BaseField.qp(p)
    for a in range(1, 3 * p):
        if a % p == 0:
            continue
        want = 2 if sympy.legendre_symbol(a % p, p) == 1 else 1
        assert oracle_extension_count(K, Poly(K, [-a, 0, 1])) == want


def test_eisenstein_is_irreducible():
    rng = random.Random(4)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        K = BaseField.qp(p)
        n = rng.randint(2, 6)
        cs = [p * rng.randint(-5, 5) for _ in range(n)]
        cs[0] = p * rng.choice([1, 2, 4, 7, -1]) if cs[0] % (p * p) == 0 or cs[0] == 0 else cs[0]
        if cs[0] % (p * p) == 0:
            continue
        assert oracle_extension_count(K, Poly(K, cs + [1])) == 1


def test_hensel_separable_reduction():
    # integral phi whose reduction is squarefree mod p factors like its reduction
    rng = random.Random(9)
    checked = 0
    while checked < 30:
        p = rng.choice([2, 3, 5, 7])
        K = BaseField.qp(p)
        cs = [rng.randint(-20, 20) for _ in range(rng.randint(1, 6))] + [1]
        k = PrimeField(p)
        red = Poly(k, [k.embed(c) for c in cs])
        if red.gcd(red.derivative()).degree > 0:
            continue
        checked += 1
        assert oracle_extension_count(K, Poly(K, cs)) == len(factor(red))


def test_oracle_rejects():
    with pytest.raises(ValueError):
        oracle_extension_count(BaseField.qt(), P("x^2-t", BaseField.qt()))
    K = BaseField.qp(3)
    with pytest.raises(ValueError):
        oracle_extension_count(K, P("(x-1)^2", K))
