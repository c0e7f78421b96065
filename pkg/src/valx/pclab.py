"""Finite truncations of pseudo-convergent sequences and their value profiles.

A sequence ``(a_alpha, gamma_alpha)`` with ``nu(a_beta - a_alpha) = gamma_alpha``
for ``beta > alpha`` defines the family of valuations
``mu_alpha = omega_(a_alpha, gamma_alpha)``.  For a polynomial f the map
``gamma_alpha -> mu_alpha(f)`` is concave and piecewise linear with integer
slopes; its terminal slope ``v`` decides whether ``nu(f(a_alpha))`` settles
(``v = 0``) or keeps growing.

Every verdict here is a statement about the stored horizon only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .basefield import BaseField
from .chain import gauss, scalar_to_json
from .extend import InvariantViolation, extensions
from .poly import Poly, newton_polygon, taylor_coefficients
from .values import INF, Value, value, value_to_json

PROVENANCES = ("hensel-iteration", "series-truncation", "user")


class NonSimpleSeed(ValueError):
    """The Newton iteration is not guaranteed to converge from this seed."""


@dataclass(frozen=True)
class PCSequence:
    base: BaseField
    terms: tuple  # ((a_0, gamma_0), (a_1, gamma_1), ...)
    provenance: str = "user"
    target: Optional[Poly] = None  # the polynomial a Hensel sequence converges to a root of

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        K = self.base
        terms = tuple((K.embed(a), value(g)) for a, g in self.terms)
        object.__setattr__(self, "terms", terms)
        self.validate()

    def validate(self) -> None:
        K = self.base
        gs = self.gammas
        for g in gs:
            if g is INF:
                raise ValueError("pseudo-convergent sequences have finite gammas")
        for i in range(1, len(gs)):
            if not gs[i] > gs[i - 1]:
                raise ValueError(f"gamma is not strictly increasing at stage {i}")
        for i, (a_i, g_i) in enumerate(self.terms):
            for a_j, _g in self.terms[i + 1 :]:
                if K.nu(a_j - a_i) != g_i:
                    raise ValueError(f"nu(a_beta - a_{i}) differs from gamma_{i} = {g_i}")

    def __len__(self):
        return len(self.terms)

    @property
    def horizon(self) -> int:
        return len(self.terms)

    @property
    def points(self) -> list:
        return [a for a, _g in self.terms]

    @property
    def gammas(self) -> list[Value]:
        return [g for _a, g in self.terms]

    def valuation(self, alpha: int):
        a, g = self.terms[alpha]
        return gauss(self.base, a, g)

    def to_json(self) -> dict:
        K = self.base
        return {
            "base": K.to_json(),
            "provenance": self.provenance,
            "points": [scalar_to_json(K, a) for a in self.points],
            "gammas": [value_to_json(g) for g in self.gammas],
        }


def _as_poly(K: BaseField, f) -> Poly:
    if isinstance(f, Poly):
        return f if f.field == K else Poly(K, f.coeffs)
    return Poly(K, f)


def from_hensel(K: BaseField, phi, seed, steps: int) -> PCSequence:
    """Newton iteration ``a -> a - phi(a)/phi'(a)`` from ``seed``, ``steps`` terms.

    Convergence needs ``nu(phi(seed)) > 2 nu(phi'(seed))``; the common case is
    a simple residual root (``nu(phi') = 0 < nu(phi)``).  The iteration stops
    early if it lands on an exact root.
    """
    phi = _as_poly(K, phi)
    if steps < 1:
        raise ValueError("steps must be positive")
    a = K.embed(seed)
    d = phi.derivative()
    v0, dv = K.nu(phi(a)), K.nu(d(a))
    if dv is INF:
        raise NonSimpleSeed(f"phi' vanishes at the seed {a}")
    if v0 is INF:
        raise NonSimpleSeed(f"the seed {a} is already a root")
    if not v0 > 2 * dv:
        raise NonSimpleSeed(f"nu(phi(seed)) = {v0} does not exceed 2 nu(phi'(seed)) = {2 * dv}")
    pts = [a]
    for _ in range(steps):
        fa = phi(a)
        if not fa:
            break
        a = a - fa / d(a)
        pts.append(a)
    terms = [(pts[i], K.nu(pts[i + 1] - pts[i])) for i in range(len(pts) - 1)]
    return PCSequence(K, tuple(terms), "hensel-iteration", phi)


def from_series(K: BaseField, coeffs: Sequence, steps: Optional[int] = None) -> PCSequence:
    """Partial sums of ``sum c_i pi^i`` (pi the uniformizer), cut where the next term is nonzero.

    Each nonzero coefficient after the first ends one term, so ``a_k`` is the
    sum up to the k-th nonzero coefficient and ``gamma_k`` is the exponent of
    the next one.
    """
    pi = K.uniformizer
    cs = [K.embed(c) for c in coeffs]
    support = [i for i, c in enumerate(cs) if c]
    if any(K.nu(cs[i]) != 0 for i in support):
        raise ValueError("series coefficients must be units")
    terms = []
    acc = K.zero
    for k, i in enumerate(support[:-1]):
        acc = acc + cs[i] * pi**i
        terms.append((acc, Fraction(support[k + 1])))
    if steps is not None:
        terms = terms[:steps]
    return PCSequence(K, tuple(terms), "series-truncation")


# -- value profiles ---------------------------------------------------------


def _taylor_data(K: BaseField, f: Poly, a):
    hs = taylor_coefficients(f, a)
    return [K.nu(h) for h in hs]


def _omega(vals: list, g: Value) -> Value:
    """``min_j (vals[j] + j g)``, the value of f under omega_(a, g)."""
    return min(v + j * g for j, v in enumerate(vals) if v is not INF)


def _right_slope(vals: list, g: Value) -> int:
    """Smallest j attaining the minimum: the number of roots at distance > g."""
    m = _omega(vals, g)
    return min(j for j, v in enumerate(vals) if v is not INF and v + j * g == m)


def _left_slope(vals: list, g: Value) -> int:
    """Largest j attaining the minimum: the number of roots at distance >= g."""
    m = _omega(vals, g)
    return max(j for j, v in enumerate(vals) if v is not INF and v + j * g == m)


@dataclass
class ValueProfile:
    gammas: list
    values: list  # mu_alpha(f)
    breakpoints: list  # gamma positions where the slope drops
    breakpoint_stages: list  # alpha with gamma_{alpha-1} < breakpoint <= gamma_alpha
    slopes: list  # integer slope of each piece, left to right
    offsets: list  # value = offset + slope * gamma on each piece
    v: int  # terminal slope

    @property
    def k(self) -> int:
        return self.slopes[0] if self.slopes else self.v

    @property
    def verdict(self) -> str:
        return "fixed" if self.v == 0 else "increasing"

    def at(self, g: Value) -> Value:
        """The interpolated profile at gamma g inside the sampled range."""
        g = Fraction(g)
        i = 0
        while i < len(self.breakpoints) and g > self.breakpoints[i]:
            i += 1
        return self.offsets[i] + self.slopes[i] * g

    def to_json(self) -> dict:
        return {
            "gammas": [value_to_json(g) for g in self.gammas],
            "values": [value_to_json(v) for v in self.values],
            "breakpoints": [value_to_json(b) for b in self.breakpoints],
            "breakpoint_stages": list(self.breakpoint_stages),
            "slopes": list(self.slopes),
            "offsets": [value_to_json(o) for o in self.offsets],
            "v": self.v,
            "verdict": self.verdict,
        }


def profile(seq: PCSequence, f) -> ValueProfile:
    """The function ``gamma_alpha -> mu_alpha(f)`` with its exact breakpoints.

    Between ``gamma_{alpha-1}`` and ``gamma_alpha`` the family is continued by
    ``omega_(a_alpha, gamma)``, which agrees with both neighbours at the
    endpoints.  Its breakpoints are the distances from ``a_alpha`` to the
    roots of f, read off the Newton polygon of ``f(x + a_alpha)``.
    """
    K = seq.base
    f = _as_poly(K, f)
    if not f:
        raise ValueError("the profile of the zero polynomial is undefined")
    if not seq.terms:
        raise ValueError("empty sequence")
    gammas = seq.gammas
    values = [seq.valuation(i).eval(f) for i in range(len(seq))]
    data = [_taylor_data(K, f, a) for a in seq.points]
    for i, g in enumerate(gammas):
        if _omega(data[i], g) != values[i]:
            raise InvariantViolation(f"Taylor form and chain disagree on mu_{i}(f)")

    # sample the interpolated function at every sampled gamma and every inner breakpoint
    xs: list[tuple[Fraction, int]] = [(gammas[0], 0)]
    for i in range(1, len(gammas)):
        lo, hi = gammas[i - 1], gammas[i]
        if f.degree >= 1:
            pts = [(j, v) for j, v in enumerate(data[i])]
            inner = sorted(
                {d for d in newton_polygon(pts).root_valuation_multiset() if d is not INF and lo < d < hi}
            )
            xs.extend((d, i) for d in inner)
        xs.append((hi, i))
    ys = [_omega(data[i], x) for x, i in xs]

    slopes: list[int] = []
    offsets: list[Fraction] = []
    breakpoints: list[Fraction] = []
    stages: list[int] = []
    for n in range(1, len(xs)):
        (x0, _), (x1, i1) = xs[n - 1], xs[n]
        s = (ys[n] - ys[n - 1]) / (x1 - x0)
        if s.denominator != 1:
            raise InvariantViolation(f"non-integral profile slope {s} on [{x0}, {x1}]")
        s = int(s)
        if slopes and s == slopes[-1]:
            continue
        if slopes:
            if s > slopes[-1]:
                raise InvariantViolation(f"profile is not concave at gamma = {x0}")
            breakpoints.append(x0)
            stages.append(xs[n - 1][1] if x0 in gammas else i1)
        slopes.append(s)
        offsets.append(ys[n - 1] - s * x0)
    v = _left_slope(data[-1], gammas[-1])
    if not slopes:
        slopes = [v]
        offsets = [values[0] - v * gammas[0]]
    elif slopes[-1] != v:
        raise InvariantViolation("terminal slope disagrees with the last piece")
    return ValueProfile(gammas, values, breakpoints, stages, slopes, offsets, v)


# -- the remainder dichotomy --------------------------------------------------


@dataclass(frozen=True)
class Fixed:
    value: Value
    since: int
    values: tuple
    verdict: str = "fixed"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "value": value_to_json(self.value),
            "since": self.since,
            "remainder_values": [value_to_json(v) for v in self.values],
        }


@dataclass(frozen=True)
class IncreasingThroughHorizon:
    values: tuple
    pairs_checked: int
    sandwich_ok: bool
    horizon: int
    verdict: str = "increasing"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "remainder_values": [value_to_json(v) for v in self.values],
            "pairs_checked": self.pairs_checked,
            "sandwich_ok": self.sandwich_ok,
            "horizon": self.horizon,
        }


Classification = Union[Fixed, IncreasingThroughHorizon]


def classify(seq: PCSequence, f, prof: Optional[ValueProfile] = None) -> Classification:
    """Decide whether ``nu(f(a_alpha))`` settles within the horizon.

    ``nu(f(a_alpha))`` is the value of the remainder of f by ``x - a_alpha``.
    Stage alpha certifies stabilisation when every root of f lies at distance
    strictly less than ``gamma_alpha`` from ``a_alpha``; then no later term
    can change the remainder value.  Without such a stage the sandwich
    ``mu_alpha(f) <= nu(f(a_alpha)) < mu_beta(f)`` is checked on all pairs
    past the profile's last breakpoint, starting once no root of f is closer
    to ``a_alpha`` than ``gamma_alpha`` for the rest of the horizon.
    """
    K = seq.base
    f = _as_poly(K, f)
    if not f:
        raise ValueError("cannot classify the zero polynomial")
    rem = tuple(K.nu(f(a)) for a in seq.points)
    gammas = seq.gammas
    data = [_taylor_data(K, f, a) for a in seq.points]
    for i, vals in enumerate(data):
        if _left_slope(vals, gammas[i]) == 0:
            mu = [seq.valuation(j).eval(f) for j in range(i, len(seq))]
            if any(r != rem[i] for r in rem[i:]) or any(m != rem[i] for m in mu):
                raise InvariantViolation(f"remainder values move after the certified stage {i}")
            return Fixed(rem[i], i, rem)
    prof = prof or profile(seq, f)
    last = prof.breakpoints[-1] if prof.breakpoints else None
    start = 0
    if last is not None:
        # first sample on the final linear piece
        start = next((i for i in range(len(gammas)) if gammas[i] >= last), len(gammas))
    # roots near a_alpha but away from the limit lift nu(f(a_alpha)) above the profile
    near = [_right_slope(vals, g) for vals, g in zip(data, gammas)]
    while start < len(gammas) and any(near[start:]):
        start += 1
    ok = True
    pairs = 0
    for i in range(start, len(gammas)):
        if not prof.values[i] <= rem[i]:
            ok = False
        for j in range(i + 1, len(gammas)):
            pairs += 1
            if not rem[i] < prof.values[j]:
                ok = False
    return IncreasingThroughHorizon(rem, pairs, ok, len(seq))


# -- limit degree -------------------------------------------------------------


@dataclass(frozen=True)
class LimitVerdict:
    kind: str  # "transcendental-like" or "algebraic-like"
    degree: Optional[int]
    witness: Optional[Poly]
    horizon: int
    tested: int

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "degree": self.degree,
            "witness": None if self.witness is None else self.witness.format(),
            "horizon": self.horizon,
            "candidates_tested": self.tested,
        }


def _candidates(seq: PCSequence, max_degree: int, extra) -> list[Poly]:
    K = seq.base
    x = Poly.x(K)
    # x - a_last is indistinguishable from the limit at this horizon, so it is left out
    out: list[Poly] = [x - a for a in seq.points[:-1]]
    if seq.target is not None:
        for b in extensions(K, seq.target).branches:
            if b.limit:
                continue
            out.extend(phi for phi, _g in b.chain.stages)
        out.append(seq.target)
    out.extend(_as_poly(K, c) for c in extra)
    seen = set()
    uniq = []
    for c in out:
        if c and 1 <= c.degree <= max_degree and c not in seen:
            seen.add(c)
            uniq.append(c)
    return sorted(uniq, key=lambda c: c.degree)


def limit_degree(seq: PCSequence, max_degree: int, candidates: Sequence = ()) -> LimitVerdict:
    """Least degree of a tested polynomial whose remainder values keep growing.

    Candidates are ``x - a_alpha`` for all but the last point, the keys of the target's
    extension branches (Hensel sequences), the target itself and any caller
    supplied polynomials.  The verdict only speaks for this horizon.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if len(seq) < 2:
        return LimitVerdict("transcendental-like", None, None, len(seq), 0)
    cands = _candidates(seq, max_degree, candidates)
    for n, c in enumerate(cands, start=1):
        if isinstance(classify(seq, c), IncreasingThroughHorizon):
            return LimitVerdict("algebraic-like", c.degree, c, len(seq), n)
    return LimitVerdict("transcendental-like", None, None, len(seq), len(cands))
