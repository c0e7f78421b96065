"""MacLane chains: inductive valuations ``[nu; mu_1(phi_1) = gamma_1, ..., mu_r(phi_r) = gamma_r]``.

Stages are numbered from 1.  For each stage ``i`` we keep

* the value group ``Gamma_i = Gamma_{i-1} + Z gamma_i`` and ``tau_i = [Gamma_i : Gamma_{i-1}]``;
* the residue field ``F_i`` in which the residual polynomials of stage ``i``
  have their coefficients.  ``F_1`` is the residue field of the base, and
  ``F_{i+1} = F_i[z] / psi_i`` where ``psi_i`` is the monic residual
  polynomial of ``phi_{i+1}``.  ``z_i`` is the class of ``z``; ``s_i = deg psi_i``.

Homogeneous elements are normalised by canonical power products
``pi^a_0 * phi_1^a_1 * ... * phi_k^a_k`` with ``0 <= a_j < tau_j``; a power product of
value 0 reduces to a monomial in the ``z_i``.  This fixes the residual
polynomial uniquely (no choice of units is left open).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .basefield import BaseField
from .poly import Poly, phi_expansion
from .residue import ExtElt, ExtField, is_irreducible
from .values import (
    INF,
    Value,
    ValueGroup,
    group_adjoin,
    group_index,
    value,
    value_from_json,
    value_to_json,
)


class KeyViolation(ValueError):
    """The polynomial offered for augmentation is not a key polynomial."""


class ValueViolation(ValueError):
    """The value offered for augmentation does not exceed the current value."""


def _coerce_poly(K: BaseField, f) -> Poly:
    if isinstance(f, Poly):
        if f.field == K:
            return f
        return Poly(K, f.coeffs)
    return Poly(K, f)


class Chain:
    """An inductive valuation (or pseudo-valuation when the top value is INF)."""

    def __init__(self, base: BaseField, stages: Sequence[tuple]):
        stages = list(stages)
        if not stages:
            raise ValueError("a chain needs at least one stage")
        self.base = base
        self._phi: list = [None]
        self._gamma: list = [None]
        self._group: list[ValueGroup] = [ValueGroup.integers()]
        self._tau: list[int] = [1]
        self._field: list = [None, base.residue_field]
        self._psi: list = [None]
        self._z: list = [None]
        self._exp_memo: dict = {}
        self._val_memo: dict = {}
        self._canon_memo: dict = {}
        for phi, gamma in stages:
            self._push(_coerce_poly(base, phi), value(gamma))

    # -- construction ----------------------------------------------------

    def _push(self, phi: Poly, gamma: Value):
        k = len(self._phi) - 1
        if not phi.is_monic() or phi.degree < 1:
            raise KeyViolation(f"key polynomials are monic of positive degree, got {phi}")
        if k == 0:
            if phi.degree != 1:
                raise KeyViolation(f"the first key polynomial must have degree 1, got {phi}")
        else:
            if self._gamma[k] is INF:
                raise ValueViolation("only the last stage may carry the value INF")
            if phi.degree <= self._phi[k].degree:
                raise KeyViolation("key degrees must strictly increase along a chain")
            if not self._is_key(k, phi):
                raise KeyViolation(f"{phi} is not a key polynomial for stage {k}")
            v = self._value(k, phi)
            if not gamma > v:
                raise ValueViolation(f"gamma = {gamma} must exceed mu({phi}) = {v}")
            R = self._residual(k, phi).monic()
            Fk = self._field[k]
            if R.degree == 1:
                self._field.append(Fk)
                self._z.append(-R[0])
            else:
                Fn = ExtField(Fk, R, name=f"z{k}")
                self._field.append(Fn)
                self._z.append(Fn.gen)
            self._psi.append(R)
        self._phi.append(phi)
        self._gamma.append(gamma)
        prev = self._group[-1]
        if gamma is INF:
            self._group.append(prev)
            self._tau.append(1)
        else:
            g = group_adjoin(prev, gamma)
            self._group.append(g)
            self._tau.append(group_index(prev, g))

    # -- accessors -------------------------------------------------------

    def __len__(self):
        return len(self._phi) - 1

    @property
    def stages(self) -> list[tuple[Poly, Value]]:
        return list(zip(self._phi[1:], self._gamma[1:]))

    @property
    def phi_top(self) -> Poly:
        return self._phi[-1]

    @property
    def gamma_top(self) -> Value:
        return self._gamma[-1]

    @property
    def degree(self) -> int:
        return self._phi[-1].degree

    @property
    def value_group(self) -> ValueGroup:
        return self._group[-1]

    @property
    def residue_field(self):
        """``F_r``: coefficient field of top-stage residual polynomials."""
        return self._field[len(self)]

    @property
    def tower(self) -> list[Poly]:
        """Minimal polynomials ``psi_1, ..., psi_{r-1}`` of the residue tower."""
        return list(self._psi[1:])

    def tau(self, i: int) -> int:
        return self._tau[i]

    def s(self, i: int) -> int:
        return self._psi[i].degree if 1 <= i < len(self) else 1

    @property
    def e(self) -> int:
        out = 1
        for t in self._tau[1:]:
            out *= t
        return out

    @property
    def f(self) -> int:
        out = 1
        for psi in self._psi[1:]:
            out *= psi.degree
        return out

    @property
    def is_terminal(self) -> bool:
        return self.gamma_top is INF

    def __eq__(self, other):
        return isinstance(other, Chain) and self.base == other.base and self.stages == other.stages

    def __hash__(self):
        return hash((self.base, tuple((p, g) for p, g in self.stages)))

    def __repr__(self):
        body = "; ".join(f"mu({p}) = {g}" for p, g in self.stages)
        return f"[{self.base.name}; {body}]"

    def truncate(self, k: int) -> "Chain":
        """The chain ``mu_k`` made of the first ``k`` stages."""
        if not 1 <= k <= len(self):
            raise ValueError(f"cannot truncate a chain of length {len(self)} to {k}")
        return Chain(self.base, self.stages[:k])

    def with_top_value(self, gamma) -> "Chain":
        """Same keys, top value replaced by ``gamma``."""
        return Chain(self.base, self.stages[:-1] + [(self.phi_top, value(gamma))])

    # -- evaluation ------------------------------------------------------

    def _expansion(self, k: int, g: Poly) -> list[Poly]:
        key = (k, g)
        out = self._exp_memo.get(key)
        if out is None:
            out = phi_expansion(g, self._phi[k])
            self._exp_memo[key] = out
        return out

    def _value(self, k: int, g: Poly) -> Value:
        if not g:
            return INF
        if k == 0:
            if g.degree > 0:
                raise ValueError("level 0 only values constants")
            return self.base.nu(g[0])
        key = (k, g)
        out = self._val_memo.get(key)
        if out is not None:
            return out
        if g.degree < self._phi[k].degree:
            out = self._value(k - 1, g)
        else:
            gamma = self._gamma[k]
            out = INF
            for j, gj in enumerate(self._expansion(k, g)):
                if not gj:
                    continue
                if j == 0:
                    t = self._value(k - 1, gj)
                elif gamma is INF:
                    continue
                else:
                    t = self._value(k - 1, gj) + j * gamma
                if t < out:
                    out = t
        self._val_memo[key] = out
        return out

    def eval(self, f) -> Value:
        f = _coerce_poly(self.base, f)
        return self._value(len(self), f)

    __call__ = eval

    # -- power products and residues -------------------------------------

    def _canon(self, v: Value, k: int) -> tuple:
        """Exponents ``(a_0, ..., a_k)`` of the canonical power product of value ``v``."""
        key = (v, k)
        out = self._canon_memo.get(key)
        if out is not None:
            return out
        if v is INF:
            raise ValueError("INF has no power product")
        if k == 0:
            if Fraction(v).denominator != 1:
                raise ValueError(f"{v} is not in the value group of the base")
            out = (int(v),)
        else:
            gamma = self._gamma[k]
            lower = self._group[k - 1]
            for a in range(self._tau[k]):
                if (v - a * gamma) in lower:
                    out = self._canon(v - a * gamma, k - 1) + (a,)
                    break
            else:
                raise ValueError(f"{v} is not in the value group of stage {k}")
        self._canon_memo[key] = out
        return out

    def _red_pp0(self, E) -> object:
        """Residue in ``F_{n+1}`` of the value-0 power product with exponents ``E`` (length n+1)."""
        E = list(E)
        n = len(E) - 1
        F = self._field[n + 1]
        acc = F.one
        for i in range(n, 0, -1):
            a = E[i]
            if not a:
                continue
            tau = self._tau[i]
            if a % tau:
                raise ArithmeticError("power product is not of value 0")
            m = a // tau
            acc = acc * F.embed(self._z[i]) ** m
            c = self._canon(tau * self._gamma[i], i - 1)
            for t in range(i):
                E[t] += m * c[t]
            E[i] = 0
        if E[0]:
            raise ArithmeticError("power product is not of value 0")
        return acc

    def _rho(self, k: int, h: Poly):
        """Residue in ``F_{k+1}`` of ``h / pp_k(mu_k(h))`` for ``deg h < deg phi_{k+1}``."""
        if k == 0:
            c = h[0]
            return self.base.unit_residue(c)
        R = self._rfull(k, h)
        F = self._field[k + 1]
        z = self._z[k]
        acc = F.zero
        for c in reversed(R.coeffs):
            acc = acc * z + F.embed(c)
        return acc

    def _rfull(self, k: int, g: Poly) -> Poly:
        """Residual polynomial of ``g`` at stage ``k`` including the power of ``y`` forced by normalisation."""
        gamma = self._gamma[k]
        if gamma is INF:
            raise ValueError("residual polynomials need a finite top value")
        v = self._value(k, g)
        tau = self._tau[k]
        a = self._canon(v, k)[k]
        base_vec = self._canon(v - a * gamma, k - 1)
        tau_vec = self._canon(tau * gamma, k - 1)
        F = self._field[k]
        coeffs: dict[int, object] = {}
        for j, gj in enumerate(self._expansion(k, g)):
            if not gj:
                continue
            w = self._value(k - 1, gj)
            if w + j * gamma != v:
                continue
            m, rem = divmod(j - a, tau)
            if rem:
                raise ArithmeticError("inconsistent residual exponents")
            cw = self._canon(w, k - 1)
            E = tuple(x + m * y - z for x, y, z in zip(cw, tau_vec, base_vec))
            coeffs[m] = F.embed(self._rho(k - 1, gj)) * self._red_pp0(E)
        top = max(coeffs)
        return Poly(F, [coeffs.get(i, F.zero) for i in range(top + 1)])

    def _residual(self, k: int, g: Poly) -> Poly:
        R = self._rfull(k, g)
        shift = 0
        while not R.coeffs[shift]:
            shift += 1
        if shift:
            R = Poly(R.field, R.coeffs[shift:])
        return R

    def residual_polynomial(self, f) -> Poly:
        """Residual polynomial of ``f`` over :attr:`residue_field`, in the variable ``y``."""
        f = _coerce_poly(self.base, f)
        if not f:
            raise ValueError("the zero polynomial has no residual polynomial")
        if self.gamma_top is INF:
            raise ValueError("residual polynomials need a finite top value")
        return self._residual(len(self), f)

    # -- key polynomials -------------------------------------------------

    def _is_key(self, k: int, psi: Poly) -> bool:
        if self._gamma[k] is INF:
            raise ValueError("key polynomials are defined for finite top values")
        if not psi.is_monic() or psi.degree < 1:
            return False
        phi = self._phi[k]
        if psi.degree < phi.degree or psi.degree % phi.degree:
            return False
        if psi.degree == phi.degree and self._value(k, psi - phi) >= self._gamma[k]:
            return True
        exp = self._expansion(k, psi)
        ell = len(exp) - 1
        v = self._value(k, psi)
        gamma = self._gamma[k]
        if self._value(k - 1, exp[0]) != v or ell * gamma != v:
            return False
        R = self._residual(k, psi)
        return R.degree * self._tau[k] == ell and is_irreducible(R.monic())

    def is_key(self, psi) -> bool:
        return self._is_key(len(self), _coerce_poly(self.base, psi))

    def _lift(self, k: int, w: Value, zeta) -> Poly:
        """A polynomial ``h`` with ``deg h < deg phi_{k+1}``, ``mu_k(h) = w`` and residue ``zeta``."""
        K = self.base
        if k == 0:
            return Poly(K, [K.pi_power(int(w)) * K.lift(zeta)])
        Fk = self._field[k]
        Fn = self._field[k + 1]
        zeta = Fn.embed(zeta)
        parts = list(zeta.c) if Fn is not Fk else [zeta]
        gamma = self._gamma[k]
        tau = self._tau[k]
        a = self._canon(w, k)[k]
        base_vec = self._canon(w - a * gamma, k - 1)
        tau_vec = self._canon(tau * gamma, k - 1)
        phi = self._phi[k]
        h = Poly(K, [])
        for i, zi in enumerate(parts):
            if not zi:
                continue
            j = a + i * tau
            wj = w - j * gamma
            E = tuple(x + i * y - z for x, y, z in zip(self._canon(wj, k - 1), tau_vec, base_vec))
            B = self._lift(k - 1, wj, Fk.embed(zi) / self._red_pp0(E))
            h = h + B * phi**j
        return h

    def lift_residual(self, R: Poly) -> Poly:
        """Monic key polynomial ``psi`` whose residual polynomial is ``R`` up to a unit.

        Degree-one residuals ``y - c`` are lifted through their root, so that
        over Q the Gauss lift of ``y - 2`` is ``x - 2``.
        """
        r = len(self)
        gamma = self._gamma[r]
        if gamma is INF:
            raise ValueError("cannot lift residuals through a pseudo-valuation")
        F = self.residue_field
        R = Poly(F, R.coeffs).monic()
        if R.degree < 1 or not R[0]:
            raise ValueError("residual to lift must be monic, non-constant and prime to y")
        if not is_irreducible(R):
            raise ValueError(f"residual {R.format('y')} is reducible")
        d = R.degree
        tau = self._tau[r]
        v = d * tau * gamma
        base_vec = self._canon(v, r - 1)
        tau_vec = self._canon(tau * gamma, r - 1)
        phi = self._phi[r]
        K = self.base
        kappa = self._red_pp0(tuple(d * y - z for y, z in zip(tau_vec, base_vec)))
        psi = phi ** (d * tau)
        sign = -1 if d == 1 else 1
        for m in range(d):
            c = R[m]
            if not c:
                continue
            w = (d - m) * tau * gamma
            E = tuple(x + m * y - z for x, y, z in zip(self._canon(w, r - 1), tau_vec, base_vec))
            A = self._lift(r - 1, w, (c * kappa / self._red_pp0(E)) * sign)
            if sign < 0:
                A = -A
            psi = psi + A * phi ** (m * tau)
        return psi

    def same_valuation(self, psi) -> bool:
        """Does ``psi`` define this (pseudo-)valuation in place of the top key?"""
        psi = _coerce_poly(self.base, psi)
        if not psi.is_monic() or psi.degree != self.degree:
            return False
        if self.gamma_top is INF:
            return psi == self.phi_top
        return self.eval(psi) == self.gamma_top

    # -- augmentation ----------------------------------------------------

    def augment(self, phi, gamma) -> "Chain":
        phi = _coerce_poly(self.base, phi)
        gamma = value(gamma)
        if self.gamma_top is INF:
            raise ValueViolation("a pseudo-valuation cannot be augmented")
        if phi.degree < self.degree:
            raise KeyViolation("key degree below the top key degree")
        if not self.is_key(phi):
            raise KeyViolation(f"{phi} is not a key polynomial for {self!r}")
        v = self.eval(phi)
        if not gamma > v:
            raise ValueViolation(f"gamma = {gamma} must exceed mu({phi}) = {v}")
        if phi.degree == self.degree:
            return Chain(self.base, self.stages[:-1] + [(phi, gamma)])
        return Chain(self.base, self.stages + [(phi, gamma)])

    # -- invariants ------------------------------------------------------

    def invariants(self) -> dict:
        finite = self.gamma_top is not INF
        return {
            "group": self.value_group,
            "e": self.e,
            "f": self.f,
            "tower": [(self._tau[i], self.s(i)) for i in range(1, len(self) + 1)],
            "abhyankar": {"residue_transcendence": 1 if finite else 0, "rat_rank_gain": 0},
        }

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "stages": [
                {"phi": [scalar_to_json(self.base, c) for c in p.coeffs], "gamma": value_to_json(g)}
                for p, g in self.stages
            ],
            "e": self.e,
            "f": self.f,
        }

    @classmethod
    def from_json(cls, obj) -> "Chain":
        K = BaseField.from_json(obj["base"])
        stages = []
        for st in obj["stages"]:
            phi = st["phi"]
            if isinstance(phi, str):
                from .parsing import parse_poly

                p = parse_poly(phi, K)
            else:
                p = Poly(K, [scalar_from_json(K, c) for c in phi])
            stages.append((p, value_from_json(st["gamma"])))
        return cls(K, stages)


def scalar_to_json(K: BaseField, s):
    s = K.embed(s)
    if K.kind == "qp":
        return {"num": s.numerator, "den": s.denominator}
    conv = (lambda c: c.v) if K.kind == "fpt" else (lambda c: {"num": c.numerator, "den": c.denominator})
    return {"num": [conv(c) for c in s.num.coeffs], "den": [conv(c) for c in s.den.coeffs]}


def scalar_from_json(K: BaseField, obj):
    if isinstance(obj, int):
        return K.embed(obj)
    if isinstance(obj, str):
        from .parsing import parse_scalar

        return parse_scalar(obj, K)
    if K.kind == "qp" or not isinstance(obj.get("num"), list):
        return K.embed(Fraction(int(obj["num"]), int(obj.get("den", 1))))
    k = K.residue_field

    def conv(c):
        if isinstance(c, dict):
            return Fraction(int(c["num"]), int(c["den"]))
        return c

    num = Poly(k, [conv(c) for c in obj["num"]])
    den = Poly(k, [conv(c) for c in obj.get("den", [1])])
    from .basefield import RatFunc

    return RatFunc(num, den)


# -- functional interface -------------------------------------------------


def gauss(K: BaseField, b, gamma) -> Chain:
    """The valuation ``omega_(b, gamma)``: single stage ``mu(x - b) = gamma``."""
    b = K.embed(b)
    return Chain(K, [(Poly(K, [-b, K.one]), value(gamma))])


def eval_chain(c: Chain, f) -> Value:
    return c.eval(f)


def augment(c: Chain, phi, gamma) -> Chain:
    return c.augment(phi, gamma)


def residual_polynomial(c: Chain, f) -> Poly:
    return c.residual_polynomial(f)


def is_key(c: Chain, psi) -> bool:
    return c.is_key(psi)


def lift_residual(c: Chain, R: Poly) -> Poly:
    return c.lift_residual(R)


def same_valuation(c: Chain, psi) -> bool:
    return c.same_valuation(psi)


def invariants(c: Chain) -> dict:
    return c.invariants()
