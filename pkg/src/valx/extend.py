"""Enumeration of the extensions of nu to K[x]/(phi) by MacLane's tree of chains.

Each leaf of the tree is a :class:`Branch`: an irreducible factor ``F`` of
``phi`` over the completion, presented by a key polynomial ``psi`` with
``deg psi = deg F`` sitting on top of a chain ``below``.  When ``psi`` divides
``phi`` over K the branch is *exact* and its pseudo-valuation is the chain
``[below; psi -> INF]``.  Otherwise ``psi`` only approximates ``F`` and the
branch refines it on demand (one residual lift per step) to value
polynomials exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from .basefield import BaseField
from .chain import Chain, gauss, scalar_to_json
from .poly import Poly, newton_polygon, phi_expansion, separable_decompose
from .residue import factor
from .values import INF, Value, value, value_to_json

DEFAULT_STAGE_BOUND = 64


class LimitDetected(RuntimeError):
    """A branch whose refinement did not settle within the stage bound."""


class StageBoundExceeded(LimitDetected):
    pass


class InvariantViolation(AssertionError):
    """An internal consistency check failed; this is a bug, not bad input."""

    def __init__(self, msg: str, chain=None):
        super().__init__(msg)
        self.chain = chain


def default_stage_bound() -> int:
    raw = os.environ.get("VALX_STAGE_BOUND")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"VALX_STAGE_BOUND must be an integer, got {raw!r}") from None
        if n < 1:
            raise ValueError("VALX_STAGE_BOUND must be positive")
        return n
    return DEFAULT_STAGE_BOUND


def _below_value(K: BaseField, below: Optional[Chain], g: Poly) -> Value:
    if not g:
        return INF
    if below is None:
        return K.nu(g[0])
    return below.eval(g)


def _stack(K: BaseField, below: Optional[Chain], psi: Poly, gamma: Value) -> Chain:
    stages = below.stages if below is not None else []
    return Chain(K, stages + [(psi, gamma)])


def _principal_sides(K, below, target: Poly, psi: Poly, threshold: Value):
    """Sides of the psi-polygon of ``target`` whose root value exceeds ``threshold``."""
    exp = phi_expansion(target, psi)
    pts = [(j, _below_value(K, below, g)) for j, g in enumerate(exp)]
    poly = newton_polygon(pts)
    out = []
    for lam, (j0, _), (j1, _) in poly.sides():
        if lam > threshold:
            out.append((lam, j1 - j0))
    return out, poly.infinite


class Branch:
    """One extension of nu to K[x]/(phi), i.e. one irreducible factor over the completion."""

    def __init__(
        self,
        base: BaseField,
        phi: Poly,
        target: Poly,
        below: Optional[Chain],
        key: Poly,
        key_value: Value,
        limit: bool = False,
        residual_degree: int = 1,
        history: tuple = (),
    ):
        self.base = base
        self.phi = phi
        self.target = target
        self.below = below
        self.key = key
        self.key_value = key_value
        self.limit = limit
        self.history = history
        if limit:
            # key_value is the last value reached; the key is not certified
            self.chain = _stack(base, below, key, key_value) if key_value is not INF else below
            inv_chain = below
            self.e = inv_chain.e if inv_chain is not None else 1
            self.f = (inv_chain.f if inv_chain is not None else 1) * residual_degree
        else:
            self.chain = _stack(base, below, key, key_value)
            self.e = self.chain.e
            self.f = self.chain.f
        self._levels: list[tuple[Poly, Value]] = [(key, key_value)]

    @property
    def exact(self) -> bool:
        return self.key_value is INF and not self.limit

    @property
    def degree(self) -> int:
        return self.key.degree

    @property
    def assigned_degree(self) -> int:
        return self.e * self.f

    def __repr__(self):
        tag = "exact" if self.exact else ("limit" if self.limit else f"w={self.key_value}")
        return f"Branch({self.chain!r}, e={self.e}, f={self.f}, {tag})"

    # -- refinement --------------------------------------------------

    def _level(self, i: int) -> tuple[Poly, Value]:
        bound = 4 * default_stage_bound()
        while len(self._levels) <= i:
            if len(self._levels) > bound:
                raise LimitDetected("branch refinement exceeded the stage bound")
            psi, w = self._levels[-1]
            if w is INF:
                return self._levels[-1]
            self._levels.append(self._refine(psi, w))
        return self._levels[i]

    def _refine(self, psi: Poly, w: Value) -> tuple[Poly, Value]:
        K = self.base
        mu = _stack(K, self.below, psi, w)
        R = mu.residual_polynomial(self.target)
        if R.degree != 1:
            raise InvariantViolation(f"refinement residual {R.format('y')} is not linear", chain=mu)
        new = mu.lift_residual(R.monic())
        exp = phi_expansion(self.target, new)
        if not exp[0]:
            return new, INF
        sides, _ = _principal_sides(K, self.below, self.target, new, mu.eval(new))
        if len(sides) != 1 or sides[0][1] != 1:
            raise InvariantViolation("refined key does not isolate a single root")
        return new, sides[0][0]

    def _try(self, psi: Poly, w: Value, g: Poly):
        """``(value, True)`` if the psi-expansion of g determines nu(g(theta))."""
        if w is INF:
            return _stack(self.base, self.below, psi, INF).eval(g), True
        best = INF
        count = 0
        for j, gj in enumerate(phi_expansion(g, psi)):
            if not gj:
                continue
            t = _below_value(self.base, self.below, gj) + j * w
            if t < best:
                best, count = t, 1
            elif t == best:
                count += 1
        return best, count == 1

    def value(self, g) -> Value:
        """``nu(g(theta))`` for a root theta of this branch's factor."""
        if self.limit:
            raise LimitDetected("branch values are undefined past a detected limit")
        g = g if isinstance(g, Poly) else Poly(self.base, g)
        if not g:
            return INF
        if g.degree < 1:
            return self.base.nu(g[0])
        if self.exact:
            return self.chain.eval(g)
        h = g.gcd(self.target)
        q = self.target.exact_div(h)
        i = 0
        while True:
            psi, w = self._level(i)
            v, ok = self._try(psi, w, g)
            if ok:
                return v
            if h.degree > 0:
                _vq, okq = self._try(psi, w, q)
                if okq:
                    return INF
            i += 1

    def approximant(self, target) -> Chain:
        """Chain ``[below; psi -> target]`` with ``psi`` refined until its true value reaches ``target``."""
        target = value(target)
        if target is INF:
            raise ValueError("approximant targets are finite")
        if self.limit:
            if self.key_value is INF or target > self.key_value:
                raise LimitDetected("target lies beyond the detected limit")
            return _stack(self.base, self.below, self.key, target)
        i = 0
        while True:
            psi, w = self._level(i)
            if w >= target:
                return _stack(self.base, self.below, psi, target)
            i += 1

    def stage_branch(self, i: int) -> "Branch":
        """The exact branch of the i-th key of :attr:`chain`, i.e. ``[mu_{i-1}; phi_i -> INF]``."""
        stages = self.chain.stages
        phi_i = stages[i - 1][0]
        below = self.chain.truncate(i - 1) if i > 1 else None
        return Branch(self.base, phi_i, phi_i, below, phi_i, INF)

    # -- serialisation -------------------------------------------------

    def to_json(self) -> dict:
        K = self.base
        stages = [] if self.chain is None else self.chain.stages
        return {
            "stages": [
                {"phi": [scalar_to_json(K, c) for c in p.coeffs], "poly": p.format(), "gamma": value_to_json(g)}
                for p, g in stages
            ],
            "e": self.e,
            "f": self.f,
            "degree": self.assigned_degree,
            "exact": self.exact,
            "limit": self.limit,
        }


@dataclass
class ExtensionReport:
    base: BaseField
    phi: Poly
    branches: list = field(default_factory=list)

    @property
    def sum_ef(self) -> int:
        return sum(b.e * b.f for b in self.branches)

    @property
    def total_check(self) -> bool:
        return self.sum_ef == self.phi.degree and not any(b.limit for b in self.branches)

    ok = total_check

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "phi": [scalar_to_json(self.base, c) for c in self.phi.coeffs],
            "poly": self.phi.format(),
            "branches": [b.to_json() for b in self.branches],
            "sum_ef": self.sum_ef,
            "ok": self.total_check,
        }


def check_squarefree(phi: Poly) -> None:
    sep, _n = separable_decompose(phi)
    if sep.degree > 0 and sep.gcd(sep.derivative()).degree > 0:
        raise ValueError(f"{phi} is not squarefree")


class _Builder:
    def __init__(self, K: BaseField, phi: Poly, bound: int):
        self.K = K
        self.phi = phi
        self.bound = bound
        self.branches: list[Branch] = []

    def emit(self, **kw):
        self.branches.append(Branch(self.K, self.phi, **kw))

    def root(self):
        K, phi = self.K, self.phi
        x = Poly.x(K)
        work = phi
        if not phi[0]:
            self.emit(target=phi, below=None, key=x, key_value=INF)
            work = phi.exact_div(x)
        if work.degree < 1:
            return
        pts = [(j, K.nu(c)) for j, c in enumerate(work.coeffs)]
        for lam, _a, _b in newton_polygon(pts).sides():
            mu = gauss(K, 0, lam)
            R = mu.residual_polynomial(work)
            for rho, omega in factor(R):
                self.node(mu, rho, omega, work, 1)

    def node(self, mu: Chain, rho: Poly, omega: int, target: Poly, depth: int):
        K = self.K
        psi = mu.lift_residual(rho)
        if psi.degree > mu.degree:
            below = mu
        else:
            below = mu.truncate(len(mu) - 1) if len(mu) > 1 else None
        if depth > self.bound:
            self.emit(
                target=target,
                below=mu,
                key=psi,
                key_value=INF,
                limit=True,
                residual_degree=rho.degree,
                history=tuple(mu.stages),
            )
            return
        if omega == 1 and psi.degree == target.degree:
            self.emit(target=target, below=below, key=target, key_value=INF)
            return
        if not phi_expansion(target, psi)[0]:
            self.emit(target=target, below=below, key=psi, key_value=INF)
            if omega == 1:
                return
            target = target.exact_div(psi)
            omega -= 1
            if omega == 1 and psi.degree == target.degree:
                self.emit(target=target, below=below, key=target, key_value=INF)
                return
        threshold = mu.eval(psi)
        sides, _inf = _principal_sides(K, below, target, psi, threshold)
        if sum(n for _lam, n in sides) != omega:
            raise InvariantViolation(
                f"principal part of length {sum(n for _l, n in sides)} for multiplicity {omega} at {mu!r}",
                chain=mu,
            )
        if omega == 1:
            self.emit(target=target, below=below, key=psi, key_value=sides[0][0])
            return
        for lam, _n in sides:
            mu2 = mu.augment(psi, lam)
            R = mu2.residual_polynomial(target)
            for rho2, omega2 in factor(R):
                self.node(mu2, rho2, omega2, target, depth + 1)


def extensions(K: BaseField, phi, stage_bound: Optional[int] = None) -> ExtensionReport:
    """All extensions of nu to K[x]/(phi) for monic squarefree ``phi``."""
    phi = phi if isinstance(phi, Poly) else Poly(K, phi)
    if phi.field != K:
        phi = Poly(K, phi.coeffs)
    if phi.degree < 1 or not phi.is_monic():
        raise ValueError("phi must be monic of positive degree")
    check_squarefree(phi)
    bound = default_stage_bound() if stage_bound is None else int(stage_bound)
    b = _Builder(K, phi, bound)
    b.root()
    return ExtensionReport(K, phi, b.branches)


def approximant(b: Branch, target) -> Chain:
    return b.approximant(target)
