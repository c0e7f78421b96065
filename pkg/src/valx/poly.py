"""Dense univariate polynomials over an exact field, phi-adic expansions and
Newton polygons.

A :class:`Poly` keeps a reference to its coefficient field (any object with
``zero``, ``one``, ``embed`` and ``characteristic``) and an immutable tuple of
coefficients, lowest degree first, without trailing zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .values import INF, Value


class Poly:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs: Iterable = ()):
        cs = [field.embed(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, field, coeffs: tuple) -> "Poly":
        # coeffs already embedded and stripped
        p = object.__new__(cls)
        p.field = field
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def x(cls, field) -> "Poly":
        return cls._raw(field, (field.zero, field.one))

    @classmethod
    def const(cls, field, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, n: int, c=None) -> "Poly":
        c = field.one if c is None else field.embed(c)
        return cls(field, [field.zero] * n + [c])

    # -- basic accessors -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __len__(self):
        return len(self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return self.format("x")

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = str(c)
            if any(ch in cs for ch in "+-/ ") and not (cs.startswith("-") and cs[1:].isdigit()):
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
                continue
            mono = var if i == 1 else f"{var}^{i}"
            if c == self.field.one:
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}")
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    # -- ring operations -------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly(self.field, [other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        while out and not out[-1]:
            out.pop()
        return Poly._raw(self.field, tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field.embed(other)
            if not c:
                return Poly._raw(self.field, ())
            return Poly._raw(self.field, tuple(a * c for a in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(self.field, ())
        zero = self.field.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        while out and not out[-1]:
            out.pop()
        return Poly._raw(self.field, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly._raw(self.field, (self.field.one,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        lead = other.coeffs[-1]
        inv = self.field.one / lead
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return Poly._raw(self.field, ()), self
        zero = self.field.zero
        quo = [zero] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv
            quo[k - db] = q
            for j in range(db + 1):
                rem[k - db + j] = rem[k - db + j] - q * bc[j]
        rem = rem[:db]
        while rem and not rem[-1]:
            rem.pop()
        while quo and not quo[-1]:
            quo.pop()
        return Poly._raw(self.field, tuple(quo)), Poly._raw(self.field, tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def scale(self, c) -> "Poly":
        return self * c

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * (self.field.one / self.coeffs[-1])

    def __call__(self, x):
        """Horner evaluation at ``x`` (scalar or polynomial)."""
        if not self.coeffs:
            return self.field.zero if not isinstance(x, Poly) else Poly._raw(x.field, ())
        acc = self.coeffs[-1]
        if isinstance(x, Poly):
            acc = Poly(x.field, [acc])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def shift(self, c) -> "Poly":
        """Return ``f(x + c)``."""
        return Poly(self.field, taylor_coefficients(self, c))

    def compose(self, g: "Poly") -> "Poly":
        return self(g)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Poly"):
        """Return ``(g, s, t)`` with ``g = s*self + t*other`` monic."""
        one = Poly._raw(self.field, (self.field.one,))
        zero = Poly._raw(self.field, ())
        r0, r1, s0, s1, t0, t1 = self, other, one, zero, zero, one
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if not r0:
            return r0, s0, t0
        inv = self.field.one / r0.lc
        return r0 * inv, s0 * inv, t0 * inv

    def inflate(self, k: int) -> "Poly":
        """Return ``f(x^k)``."""
        zero = self.field.zero
        out = []
        for c in self.coeffs:
            out.append(c)
            out.extend([zero] * (k - 1))
        return Poly(self.field, out)

    def map_coeffs(self, fn, field=None) -> "Poly":
        return Poly(field or self.field, [fn(c) for c in self.coeffs])


def taylor_coefficients(f: Poly, c) -> list:
    """Coefficients of ``f(x + c)`` in ``x``, i.e. the Hasse derivatives of ``f`` at ``c``."""
    # in-place synthetic division keeps this valid in every characteristic
    cs = list(f.coeffs)
    n = len(cs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + c * cs[j + 1]
    return cs


def hasse_polys(f: Poly) -> list[Poly]:
    """Polynomials ``D_k f`` with ``f(x + y) = sum_k D_k f(x) y^k``."""
    field = f.field
    out = []
    for k in range(len(f.coeffs)):
        cs = [field.zero] * (len(f.coeffs) - k)
        for i in range(k, len(f.coeffs)):
            cs[i - k] = f.coeffs[i] * comb(i, k)
        out.append(Poly(field, cs))
    return out


# -- phi-adic expansion ---------------------------------------------------


def phi_expansion(f: Poly, phi: Poly) -> list[Poly]:
    """Coefficients ``[g_0, ..., g_m]`` with ``f = sum g_j phi^j`` and ``deg g_j < deg phi``."""
    if not phi.is_monic():
        raise ValueError("phi must be monic")
    if phi.degree < 1:
        raise ValueError("phi must have degree >= 1")
    if phi.degree == 1:
        # Taylor shift is much cheaper than repeated division
        root = -phi.coeffs[0]
        return [Poly(f.field, [c]) for c in taylor_coefficients(f, root)] if f else []
    out = []
    while f:
        f, r = divmod(f, phi)
        out.append(r)
    return out


def recompose(expansion: Sequence[Poly], phi: Poly) -> Poly:
    acc = Poly(phi.field, [])
    for g in reversed(expansion):
        acc = acc * phi + g
    return acc


# -- separable decomposition ----------------------------------------------


def separable_decompose(phi: Poly, characteristic: int | None = None):
    """Return ``(phi_sep, n)`` with ``phi(x) = phi_sep(x^(p^n))`` and ``n`` maximal."""
    if not phi.is_monic():
        raise ValueError("phi must be monic")
    p = phi.field.characteristic if characteristic is None else characteristic
    if not p or phi.degree < 1:
        return phi, 0
    n = 0
    cs = list(phi.coeffs)
    while len(cs) > 1 and all(not c for i, c in enumerate(cs) if i % p):
        cs = cs[::p]
        n += 1
    return Poly(phi.field, cs), n


# -- Newton polygons ------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(abscissa, ordinate)`` points.

    ``slopes`` holds ``(slope, length)`` pairs in (j, value) coordinates, left
    to right, so slopes strictly increase.  A segment of slope ``-s`` accounts
    for ``length`` roots of valuation ``s``.  ``infinite`` counts the leading
    points with ordinate INF, i.e. roots of valuation INF.
    """

    vertices: tuple
    slopes: tuple
    infinite: int = 0

    def root_valuations(self) -> list[tuple[Value, int]]:
        """``(valuation, multiplicity)`` pairs, largest valuation first."""
        out = []
        if self.infinite:
            out.append((INF, self.infinite))
        out.extend((-s, n) for s, n in self.slopes)
        return out

    def root_valuation_multiset(self) -> list[Value]:
        out = []
        for v, n in self.root_valuations():
            out.extend([v] * n)
        return out

    def sides(self):
        """Yield ``(root_valuation, (j0, y0), (j1, y1))`` for each finite segment."""
        for k, (s, _n) in enumerate(self.slopes):
            yield -s, self.vertices[k], self.vertices[k + 1]


def newton_polygon(points: Iterable[tuple[int, Value]]) -> NewtonPolygon:
    pts = sorted((int(j), v) for j, v in points)
    if not pts:
        raise ValueError("empty point set")
    finite = [(j, Fraction(v)) for j, v in pts if v is not INF]
    if not finite:
        raise ValueError("Newton polygon needs a point with finite ordinate")
    j_first = finite[0][0]
    infinite = j_first - pts[0][0]
    best: dict[int, Fraction] = {}
    for j, v in finite:
        if j not in best or v < best[j]:
            best[j] = v
    pts = sorted(best.items())
    hull: list[tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above segment hull[-2] -> p
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(hull), tuple(slopes), infinite)
