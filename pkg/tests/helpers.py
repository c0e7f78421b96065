"""Shared generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from valx import BaseField, Chain, Poly, extensions, parse_poly

PRIMES = (2, 3, 5, 7)


def structured_poly(rng: random.Random, K: BaseField, max_degree: int = 8) -> Poly:
    """Monic product of small factors with p-power-scaled coefficients.

    Plain uniform coefficients almost always give one-stage chains; scaling by
    powers of p and adding deep perturbations produces multi-stage chains,
    ramification and residue growth.
    """
    p = K.p
    want = rng.randint(2, max_degree)
    f = Poly(K, [1])
    while f.degree < want:
        d = rng.randint(1, 4)
        cs = [rng.choice([0, 1, -1, 2, 3]) * p ** rng.randint(0, 6) + rng.choice([0, 0, p ** rng.randint(3, 9)]) for _ in range(d)]
        f = f * Poly(K, cs + [1])
    return f


def towered_poly(rng: random.Random, K: BaseField, max_degree: int = 8) -> Poly:
    """``h(x)^m`` plus a deep perturbation, which tends to give chains of three or more stages."""
    p = K.p
    d1 = rng.choice([2, 2, 3, 4])
    d2 = max(1, min(rng.choice([2, 2, 3, 4]), max_degree // d1))
    h = Poly(K, [rng.choice([1, -1, 2]) * p ** rng.randint(0, 2)] + [rng.choice([0, 0, 1]) * p for _ in range(d1 - 1)] + [1])
    noise = Poly(K, [rng.choice([0, 1, -1, 2]) * p ** rng.randint(2, 7) for _ in range(d1 * d2)])
    return h**d2 + noise


def uniform_poly(rng: random.Random, K: BaseField, max_degree: int = 8) -> Poly:
    d = rng.randint(1, max_degree)
    return Poly(K, [rng.randint(-60, 60) for _ in range(d)] + [1])


def is_squarefree(f: Poly) -> bool:
    return f.gcd(f.derivative()).degree == 0


def random_corpus(n: int, seed: int = 20240611, max_degree: int = 8) -> list[tuple[BaseField, Poly]]:
    """n monic squarefree polynomials of degree <= max_degree over (Q, v_p), p in {2,3,5,7}.

    Half are products of small factors, 30% perturbed powers, the rest uniform.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        K = BaseField.qp(rng.choice(PRIMES))
        u = rng.random()
        gen = structured_poly if u < 0.5 else towered_poly if u < 0.8 else uniform_poly
        f = gen(rng, K, max_degree)
        if f.degree <= max_degree and is_squarefree(f):
            out.append((K, f))
    return out


def fixture_chains() -> list[Chain]:
    """Ten chains of assorted shapes; the last is three stages over v_2 reaching degree 8."""
    out = []
    for p, spec in [
        (2, [("x", 0)]),
        (5, [("x - 2", 1)]),
        (3, [("x", Fraction(1, 2))]),
        (2, [("x", Fraction(1, 2)), ("x^2 - 2", Fraction(5, 4))]),
        (2, [("x", 0), ("x^2 + x + 1", Fraction(1, 2))]),
        (3, [("x", Fraction(1, 3)), ("x^3 - 3", Fraction(3, 2))]),
        (5, [("x", Fraction(1, 2)), ("x^2 - 5", Fraction(7, 3))]),
        (7, [("x", 0), ("x^2 + 1", 1)]),
        (2, [("x", Fraction(1, 2)), ("x^2 - 2", Fraction(5, 4)), ("x^4 - 8*x^2 - 12*x + 12", Fraction(29, 8))]),
        (2, [("x", Fraction(1, 4)), ("x^4 - 2", Fraction(13, 8)), ("x^8 - 4*x^4 + 8*x + 4", 7)]),
    ]:
        K = BaseField.qp(p)
        out.append(Chain(K, [(parse_poly(s, K), Fraction(g)) for s, g in spec]))
    return out


def corpus_reports(corpus):
    return [(K, f, extensions(K, f)) for K, f in corpus]
