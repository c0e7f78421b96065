"""Ultrametric ball geometry of a branch over an algebraic closure.

No algebraic numbers are ever constructed.  Distances from a root theta of
the branch to the roots of a polynomial psi are the slopes of the Newton
polygon of ``psi(theta + y)``, whose coefficients (Hasse derivatives of psi
at theta) are valued exactly by the branch.

For a stage ``(phi_i, gamma_i)`` the ball data comes from a root ``a`` of
``phi_i`` itself (the exact branch ``[mu_{i-1}; phi_i -> INF]``): the
distances ``nu(a - a_j)`` feed :func:`solve_ball`, which returns the
diameter ``delta`` with ``gamma = p^n (c delta + sum_{j > c} d_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .extend import Branch, InvariantViolation, LimitDetected
from .poly import Poly, hasse_polys, newton_polygon, separable_decompose
from .values import INF, Value, value_to_json


class NoSolution(ArithmeticError):
    """No ball diameter is consistent with the given value and distances."""


@dataclass(frozen=True)
class BallData:
    delta: Value
    c: int
    k: int
    p_n: int
    distances: tuple  # sorted descending, d_2 >= d_3 >= ...
    etas: tuple  # one inter-ball distance per other conjugate ball

    @property
    def d_s(self) -> int:
        return len(self.distances) + 1

    @property
    def krasner(self) -> Optional[Value]:
        return max(self.distances) if self.distances else None

    def gamma(self) -> Value:
        """Recompute the stage value from (delta, c, distances)."""
        if self.delta is INF:
            return INF
        tail = sum(self.distances[self.c - 1 :], Fraction(0))
        return self.p_n * (self.c * self.delta + tail)

    def to_json(self) -> dict:
        return {
            "delta": value_to_json(self.delta),
            "c": self.c,
            "k": self.k,
            "p_n": self.p_n,
            "distances": [value_to_json(d) for d in self.distances],
            "etas": [value_to_json(e) for e in self.etas],
        }


@dataclass(frozen=True)
class BallStage:
    index: int
    delta: Value
    k: int
    deg: int
    s_to_next: Optional[int]
    c: int = 1
    p_n: int = 1
    gamma: Value = INF

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "delta": value_to_json(self.delta),
            "k": self.k,
            "deg": self.deg,
            "s_to_next": self.s_to_next,
            "c": self.c,
            "p_n": self.p_n,
            "gamma": value_to_json(self.gamma),
        }


def _inseparability(b: Branch, psi: Poly) -> tuple[Poly, int]:
    sep, n = separable_decompose(psi)
    q = b.base.characteristic ** n if n else 1
    return sep, q


def root_distances(b: Branch, psi: Poly) -> list[Value]:
    """``nu(theta - beta)`` over the distinct roots beta of psi, largest first.

    When theta itself is a root of psi it is left out.
    """
    if b.limit:
        raise LimitDetected("root distances need a terminal branch")
    if not psi.is_monic():
        raise ValueError("psi must be monic")
    sep, q = _inseparability(b, psi)
    if sep.degree < 1:
        return []
    vals = []
    for D in hasse_polys(sep):
        vals.append(b.value(D.inflate(q) if q > 1 else D))
    pts = list(enumerate(vals))
    if vals[0] is INF:
        pts = [(j - 1, v) for j, v in pts[1:]]
    if len(pts) == 1:
        return []
    nps = newton_polygon(pts)
    out = [v if v is INF else v / q for v in nps.root_valuation_multiset()]
    return sorted(out, reverse=True)


def solve_ball(gamma: Value, p_n: int, distances) -> BallData:
    """Diameter and orbit data solving ``gamma = p^n (c delta + sum_{j > c} d_j)``."""
    if gamma is INF:
        raise ValueError("solve_ball needs a finite value")
    ds = sorted(distances, reverse=True)
    d_s = len(ds) + 1
    target = Fraction(gamma) / p_n
    for c in range(1, d_s + 1):
        tail = sum(ds[c - 1 :], Fraction(0))
        delta = (target - tail) / c
        upper = INF if c == 1 else ds[c - 2]
        if not upper >= delta:
            continue
        if c < d_s and not delta > ds[c - 1]:
            continue
        if d_s % c:
            raise NoSolution(f"c = {c} does not divide d_s = {d_s}")
        outside = ds[c - 1 :]
        etas = []
        for i in range(0, len(outside), c):
            chunk = outside[i : i + c]
            if len(chunk) != c or any(x != chunk[0] for x in chunk):
                raise NoSolution("outer distances do not come in groups of c")
            etas.append(chunk[0])
        return BallData(delta, c, d_s // c, p_n, tuple(ds), tuple(etas))
    raise NoSolution(f"no ball solves gamma = {gamma} with distances {ds}")


def is_unique_extension(bd: BallData, gamma: Value, d: int) -> bool:
    if not bd.distances:
        return True
    return min(bd.distances) >= Fraction(gamma) / d


def etendue(b: Branch, approx_delta: Value, psi: Poly) -> Value:
    ds = root_distances(b, psi)
    if not ds:
        raise ValueError("etendue of a constant is undefined")
    return min(approx_delta, max(ds))


def mu_of_min_poly(bd: BallData, p_n: int, c: int) -> Value:
    return p_n * c * (bd.delta + sum(bd.etas, Fraction(0)))


def stage_ball_data(b: Branch) -> list[BallData]:
    """Ball data for every stage of the branch chain, then for the factor itself."""
    if b.limit:
        raise LimitDetected("ball data needs a terminal branch")
    out = []
    stages = b.chain.stages
    for i, (phi_i, g_i) in enumerate(stages, start=1):
        sep, q = _inseparability(b, phi_i)
        if g_i is INF:
            ds = root_distances(b, phi_i)
            out.append(BallData(INF, 1, sep.degree, q, tuple(ds), tuple(ds)))
        else:
            sb = b.stage_branch(i)
            out.append(solve_ball(g_i, q, root_distances(sb, phi_i)))
    if not b.exact:
        # the factor F is approximated by the top key: same degree, separable
        top = out[-1]
        inner = [d for d in root_distances(b, b.target) if d >= top.delta]
        ds = sorted(inner + [d for d in top.distances if d < top.delta], reverse=True)
        out.append(BallData(INF, 1, b.degree, 1, tuple(ds), tuple(ds)))
    return out


def _roots_inside(b: Branch, psi: Poly, delta: Value, contains_theta: bool) -> int:
    n = sum(1 for d in root_distances(b, psi) if d >= delta)
    return n + 1 if contains_theta else n


def ball_chain(b: Branch) -> list[BallStage]:
    """Nested ball families along the chain, with nesting verified by root counts."""
    data = stage_ball_data(b)
    stages = b.chain.stages
    keys = [phi for phi, _g in stages]
    gammas = [g for _phi, g in stages]
    degs = [phi.degree for phi in keys]
    if not b.exact:
        keys.append(b.target)
        gammas.append(INF)
        degs.append(b.degree)
    out = []
    for i, bd in enumerate(data):
        s = None
        if i + 1 < len(data):
            nxt = data[i + 1]
            if not nxt.delta > bd.delta:
                raise InvariantViolation(f"ball diameters do not increase at stage {i + 1}", chain=b.chain)
            terminal = nxt.delta is INF
            n_in = _roots_inside(b, keys[i + 1], bd.delta, terminal)
            if terminal and not b.exact:
                # target may contain other factors; none of their roots lie in this ball
                total = b.degree
            else:
                total = nxt.d_s
            if n_in * bd.k != total or n_in % nxt.c:
                raise InvariantViolation(f"balls of stage {i + 2} are not evenly nested in stage {i + 1}", chain=b.chain)
            s = n_in // nxt.c
            if nxt.k != s * bd.k:
                raise InvariantViolation(f"k does not multiply along stage {i + 1}", chain=b.chain)
        out.append(BallStage(i + 1, bd.delta, bd.k, degs[i], s, bd.c, bd.p_n, gammas[i]))
    return out


def jump_set(b: Branch) -> list[tuple[Value, int]]:
    """Breakpoints ``(delta_i, d_i)`` of ``delta -> deg_K B(theta, delta)`` on the chain's candidates.

    ``d_i`` is the candidate degree on ``(delta_{i-1}, delta_i]``; only the
    diameters where the degree actually increases are listed.
    """
    stages = ball_chain(b)
    keys = [phi for phi, _g in b.chain.stages]
    eps = []
    for phi_i, st in zip(keys, stages):
        ds = root_distances(b, phi_i)
        e = INF if b.value(phi_i) is INF else max(ds)
        if e != st.delta:
            raise InvariantViolation(f"etendue {e} of {phi_i} differs from the ball diameter {st.delta}", chain=b.chain)
        eps.append(e)
    out = []
    for i in range(len(keys) - 1):
        if keys[i + 1].degree > keys[i].degree:
            out.append((eps[i], keys[i].degree))
    return out


def geometry(b: Branch) -> dict:
    """JSON-ready geometry of one branch."""
    if b.limit:
        return {"characteristic_set": "empty", "stages": [], "balls": [], "jumps": []}
    data = stage_ball_data(b)
    stages = ball_chain(b)
    jumps = jump_set(b)
    return {
        "balls": [bd.to_json() for bd in data],
        "stages": [st.to_json() for st in stages],
        "jumps": [{"delta": value_to_json(d), "deg": n} for d, n in jumps],
        "characteristic_set": {"k": stages[-1].k, "delta": value_to_json(stages[-1].delta)},
    }
