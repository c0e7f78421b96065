"""The ten acceptance criteria; each test records a one-line detail for the summary."""

import json
import random
import time
from collections import Counter
from fractions import Fraction as F
from math import lcm

import pytest

from valx import (
    INF,
    BaseField,
    Fixed,
    IncreasingThroughHorizon,
    Poly,
    ValueGroup,
    ball_chain,
    classify,
    extensions,
    from_hensel,
    group_index,
    is_unique_extension,
    jump_set,
    parse_poly,
    profile,
    root_distances,
    stage_ball_data,
)
from valx.cli import run_corpus
from valx.oracle import oracle_extension_count

from helpers import fixture_chains, random_corpus

CORPUS_SIZE = 60


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(CORPUS_SIZE)


@pytest.fixture(scope="module")
def reports(corpus):
    return [(K, f, extensions(K, f)) for K, f in corpus]


def _branches(reports):
    for _K, _f, rep in reports:
        yield from rep.branches


def test_1_fundamental_identity(corpus, record_property):
    start = time.perf_counter()
    bad_sum, bad_count = [], []
    for K, f in corpus:
        rep = extensions(K, f)
        if rep.sum_ef != f.degree or not rep.ok:
            bad_sum.append(f.format())
        if len(rep.branches) != oracle_extension_count(K, f):
            bad_count.append(f.format())
    elapsed = time.perf_counter() - start
    record_property(
        "detail",
        f"{len(corpus)} polys, sum ef mismatches {len(bad_sum)}, oracle mismatches {len(bad_count)}, {elapsed:.1f}s",
    )
    assert len(corpus) >= 50
    assert not bad_sum and not bad_count
    assert elapsed < 60


@pytest.mark.parametrize(
    "p,poly,want",
    [(5, "x^2+1", [(1, 1), (1, 1)]), (2, "x^2-2", [(2, 1)]), (2, "x^2+x+1", [(1, 2)]), (3, "x^2+1", [(1, 2)])],
    ids=["v5-x2+1", "v2-x2-2", "v2-x2+x+1", "v3-x2+1"],
)
def test_2_named_extensions(p, poly, want, record_property):
    K = BaseField.qp(p)
    rep = extensions(K, parse_poly(poly, K))
    got = sorted((b.e, b.f) for b in rep.branches)
    record_property("detail", f"v_{p} {poly}: (e, f) = {got}")
    assert got == sorted(want)
    assert len(got) == oracle_extension_count(K, parse_poly(poly, K))


def test_3_ball_round_trip(reports, record_property):
    checked = bad = 0
    for b in _branches(reports):
        for (phi, g), bd in zip(b.chain.stages, stage_ball_data(b)):
            if g is INF:
                continue
            checked += 1
            if bd.gamma() != b.chain.eval(phi):
                bad += 1
    record_property("detail", f"{checked} finite stages, {bad} mismatches")
    assert checked > 0 and bad == 0


def test_4_orbit_count_and_uniqueness(reports, record_property):
    checked = bad = 0
    for b in _branches(reports):
        for (phi, g), bd in zip(b.chain.stages, stage_ball_data(b)):
            if g is INF:
                continue
            checked += 1
            if bd.k * bd.c != bd.d_s or is_unique_extension(bd, g, phi.degree) != (bd.k == 1):
                bad += 1
    record_property("detail", f"{checked} stages, {bad} failures")
    assert checked > 0 and bad == 0


def _random_poly(rng, K, max_degree=10):
    p = K.p
    d = rng.randint(0, max_degree)
    cs = []
    for _ in range(d + 1):
        c = F(rng.randint(-20, 20), rng.choice([1, 1, 1, 3, 7])) * F(p) ** rng.randint(-2, 6)
        cs.append(c)
    cs[-1] = cs[-1] or F(1)
    return Poly(K, cs)


def test_5_valuation_axioms(record_property):
    rng = random.Random(5)
    chains = fixture_chains()
    assert len(chains) == 10 and len(chains[-1]) == 3 and chains[-1].degree == 8
    pairs = mono = bad = 0
    for c in chains:
        lower = [c.truncate(k) for k in range(1, len(c))]
        for _ in range(1000):
            f, g = _random_poly(rng, c.base), _random_poly(rng, c.base)
            pairs += 1
            if c.eval(f * g) != c.eval(f) + c.eval(g):
                bad += 1
            vals = [m.eval(f) for m in lower] + [c.eval(f)]
            mono += 1
            if any(a > b for a, b in zip(vals, vals[1:])):
                bad += 1
    record_property("detail", f"{pairs} products, {mono} monotonicity checks, {bad} failures")
    assert bad == 0


def test_6_ball_nesting(reports, record_property):
    """Nesting read off the distance multisets from theta.

    A conjugate ball of stage i sits at one distance eta < delta_i from theta,
    so every eta class must hold the same ratio of stage-(i+1) roots to stage-i
    roots, namely s c_{i+1} / c_i.
    """
    steps = bad = 0
    for b in _branches(reports):
        stages = ball_chain(b)
        data = stage_ball_data(b)
        keys = [phi for phi, _g in b.chain.stages]
        if any(a.delta >= c.delta for a, c in zip(stages, stages[1:])):
            bad += 1
        for i in range(len(keys) - 1):
            st, nxt = stages[i], stages[i + 1]
            steps += 1
            if nxt.k % st.k or nxt.k != st.k * st.s_to_next:
                bad += 1
                continue
            ratio = F(st.s_to_next * data[i + 1].c, data[i].c)
            here = Counter(root_distances(b, keys[i]))
            there = Counter(root_distances(b, keys[i + 1]))
            inner_here = sum(n for d, n in here.items() if d >= st.delta) + (b.chain.stages[i][1] is INF)
            inner_there = sum(n for d, n in there.items() if d >= st.delta) + (b.chain.stages[i + 1][1] is INF)
            if inner_there != ratio * inner_here:
                bad += 1
            for eta in set(here) | set(there):
                if eta < st.delta and there[eta] != ratio * here[eta]:
                    bad += 1
    record_property("detail", f"{steps} stage transitions, {bad} failures")
    assert steps > 0 and bad == 0


def _battery(K, seq):
    x = Poly.x(K)
    p = K.p
    target = seq.target
    out = [Poly(K, [3]), x, x + 1, x - 7, x * x + 2, target, target * (x - 1), x**3 - 2, target**2 + p**40]
    a = seq.points
    for k in range(len(a) - 1):
        out.append(x - a[k] - p ** (k + 3))
        out.append(x - a[k])
    out.append((x - a[2] - p**20) * target)
    out.append((x - a[-1]) * (x - a[0]))
    return out


@pytest.mark.parametrize(
    "label,p,target,seed", [("v5 x^2+1", 5, "x^2+1", 2), ("v2 x^2+7", 2, "x^2+7", 1)], ids=["v5", "v2"]
)
def test_7_pseudo_convergent_profiles(label, p, target, seed, record_property):
    K = BaseField.qp(p)
    seq = from_hensel(K, parse_poly(target, K), seed, 8)
    battery = _battery(K, seq)
    assert len(battery) >= 20 and seq.horizon == 8
    bad = pairs = fixed = 0
    for f in battery:
        prof = profile(seq, f)
        xs, ys = prof.gammas, prof.values
        sample = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]
        concave = all(s >= t for s, t in zip(sample, sample[1:])) and all(
            s > t for s, t in zip(prof.slopes, prof.slopes[1:])
        )
        integral = all(F(s).denominator == 1 for s in prof.slopes)
        c = classify(seq, f, prof)
        dichotomy = isinstance(c, Fixed) == (prof.v == 0)
        sandwich = True
        if isinstance(c, IncreasingThroughHorizon):
            pairs += c.pairs_checked
            sandwich = c.sandwich_ok
        else:
            fixed += 1
        if not (concave and integral and dichotomy and sandwich):
            bad += 1
    record_property(
        "detail", f"{label}: {len(battery)} polys ({fixed} fixed), {pairs} sandwich pairs, {bad} failures"
    )
    assert bad == 0 and pairs > 0


def _finite_chains(reports):
    for b in _branches(reports):
        for k in range(1, len(b.chain) + 1):
            if b.chain.stages[k - 1][1] is not INF:
                yield b.chain.truncate(k)


def test_8_abhyankar_bookkeeping(reports, record_property):
    checked = bad = 0
    Z = ValueGroup.integers()
    for c in _finite_chains(reports):
        checked += 1
        r = len(c)
        gammas = [g for _phi, g in c.stages]
        e_prod = 1
        for i in range(1, r + 1):
            e_prod *= c.tau(i)
        e_lcm = lcm(*(F(g).denominator for g in gammas))
        ok = c.e == e_prod == group_index(Z, c.value_group) == e_lcm
        f_prod = 1
        for i in range(1, r):
            s = c.s(i)
            f_prod *= s
            nxt = c.stages[i][0]
            # the residual polynomial of the next key, computed one level down
            rp = c.truncate(i).residual_polynomial(nxt)
            ok &= rp.degree == s and nxt.degree == c.tau(i) * s * c.stages[i - 1][0].degree
        ok &= c.f == f_prod
        ab = c.invariants()["abhyankar"]
        ok &= ab["residue_transcendence"] + ab["rat_rank_gain"] == 1
        bad += not ok
    record_property("detail", f"{checked} finite chains, {bad} failures")
    assert checked > 0 and bad == 0


def test_9_jump_set_matches_balls(reports, record_property):
    checked = bad = jumps = 0
    for b in _branches(reports):
        stages = ball_chain(b)
        keys = [phi for phi, _g in b.chain.stages]
        expected = [
            (stages[i].delta, stages[i].deg) for i in range(len(keys) - 1) if keys[i + 1].degree > keys[i].degree
        ]
        got = jump_set(b)
        checked += 1
        jumps += len(got)
        bad += got != expected or any(st.deg != phi.degree for st, phi in zip(stages, keys))
    record_property("detail", f"{checked} branches, {jumps} jumps, {bad} mismatches")
    assert checked > 0 and bad == 0


def test_10_determinism(corpus, tmp_path, record_property):
    inp = tmp_path / "corpus.jsonl"
    with open(inp, "w") as fh:
        for K, f in corpus:
            fh.write(json.dumps({"base": K.to_json(), "poly": f.format()}) + "\n")
    one, two = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
    s1 = run_corpus(str(inp), str(one), workers=1)
    s2 = run_corpus(str(inp), str(two), workers=4)
    same = one.read_bytes() == two.read_bytes()
    record_property("detail", f"{s1['processed']} lines, sequential vs 4 workers identical: {same}")
    assert s1["exit"] == s2["exit"] == 0
    assert same
