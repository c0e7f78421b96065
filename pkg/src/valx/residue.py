"""Residue fields: prime fields, Q, and towers of simple algebraic extensions,
plus polynomial factorization over them.

Tower elements are nested: an element of ``ExtField(base, m)`` is a tuple of
``deg m`` elements of ``base``.  Factorization uses Cantor-Zassenhaus over
finite fields and Trager's norm method over extensions of Q.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce

from .poly import Poly


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FpElt:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, FpElt):
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElt(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElt(self.v - o, self.p)

    def __rsub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElt(o - self.v, self.p)

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElt(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElt(-self.v, self.p)

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return FpElt(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by 0 in GF(p)")
        return FpElt(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElt(o, self.p) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElt(pow(self.v, n, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, FpElt):
            return self.v == o.v and self.p == o.p
        if isinstance(o, int):
            return (self.v - o) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)

    def key(self):
        return (self.v,)


class PrimeField:
    """GF(p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.q = p
        self.degree = 1
        self.zero = FpElt(0, p)
        self.one = FpElt(1, p)

    def embed(self, x):
        if isinstance(x, FpElt):
            return x
        if isinstance(x, int):
            return FpElt(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return FpElt(x.numerator * pow(x.denominator, -1, self.p), self.p)
        raise TypeError(f"cannot embed {x!r} in GF({self.p})")

    def elements(self):
        return [FpElt(i, self.p) for i in range(self.p)]

    def random_element(self, rng: random.Random):
        return FpElt(rng.randrange(self.p), self.p)

    def key(self, a):
        return (a.v,)

    def to_json(self, a):
        return a.v

    def from_json(self, obj):
        return FpElt(int(obj), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def is_finite(self):
        return True

    @property
    def depth(self):
        return 0


class RationalField:
    """Q, with elements represented as ``Fraction``."""

    characteristic = 0
    q = None
    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def embed(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot embed {x!r} in Q")

    def key(self, a):
        return (a.numerator, a.denominator)

    def to_json(self, a):
        return str(a)

    def from_json(self, obj):
        return Fraction(obj)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    @property
    def is_finite(self):
        return False

    @property
    def depth(self):
        return 0


QQ = RationalField()


class ExtElt:
    __slots__ = ("field", "c")

    def __init__(self, field: "ExtField", c: tuple):
        self.field = field
        self.c = c

    def _other(self, o):
        if isinstance(o, ExtElt) and o.field == self.field:
            return o
        try:
            return self.field.embed(o)
        except TypeError:
            return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ExtElt(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return ExtElt(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return ExtElt(self.field, tuple(-a for a in self.c))

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def inverse(self):
        return self.field._inv(self)

    def __truediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, o):
        if isinstance(o, ExtElt):
            return self.field == o.field and self.c == o.c
        try:
            o = self.field.embed(o)
        except TypeError:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if all(not a for a in self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return any(bool(a) for a in self.c)

    def __repr__(self):
        return self.field.format(self)

    def key(self):
        return self.field.key(self)


class ExtField:
    """``base[z] / (modulus(z))`` for a monic irreducible ``modulus``."""

    def __init__(self, base, modulus: Poly, name: str = "z"):
        if not modulus.is_monic() or modulus.degree < 2:
            raise ValueError("modulus must be monic of degree >= 2")
        self.base = base
        self.modulus = modulus
        self.name = name
        self.degree = modulus.degree * base.degree
        self.characteristic = base.characteristic
        self.q = None if base.q is None else base.q ** modulus.degree
        n = modulus.degree
        self.zero = ExtElt(self, tuple([base.zero] * n))
        self.one = ExtElt(self, tuple([base.one] + [base.zero] * (n - 1)))
        self.gen = ExtElt(self, tuple([base.zero, base.one] + [base.zero] * (n - 2)))
        self._hash = hash(("ext", base, modulus.coeffs))

    @property
    def rel_degree(self) -> int:
        return self.modulus.degree

    @property
    def is_finite(self):
        return self.q is not None

    @property
    def depth(self):
        return self.base.depth + 1

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and self._hash == other._hash
            and self.base == other.base
            and self.modulus.coeffs == other.modulus.coeffs
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({self.modulus.format(self.name)})"

    def embed(self, x):
        if isinstance(x, ExtElt) and x.field == self:
            return x
        b = self.base.embed(x)
        return ExtElt(self, (b,) + tuple([self.base.zero] * (self.rel_degree - 1)))

    def from_poly(self, f: Poly) -> ExtElt:
        r = f % self.modulus if f.degree >= self.rel_degree else f
        cs = list(r.coeffs) + [self.base.zero] * (self.rel_degree - len(r.coeffs))
        return ExtElt(self, tuple(cs))

    def to_poly(self, a: ExtElt) -> Poly:
        return Poly(self.base, a.c)

    def _mul(self, a: ExtElt, b: ExtElt) -> ExtElt:
        return self.from_poly(Poly(self.base, a.c) * Poly(self.base, b.c))

    def _inv(self, a: ExtElt) -> ExtElt:
        if not a:
            raise ZeroDivisionError("inverse of 0")
        g, s, _t = Poly(self.base, a.c).xgcd(self.modulus)
        if g.degree != 0:
            raise ArithmeticError("modulus is reducible")
        return self.from_poly(s)

    def random_element(self, rng: random.Random):
        return ExtElt(self, tuple(self.base.random_element(rng) for _ in range(self.rel_degree)))

    def key(self, a: ExtElt):
        return tuple(k for c in a.c for k in self.base.key(c))

    def format(self, a: ExtElt) -> str:
        return Poly(self.base, a.c).format(self.name)

    def to_json(self, a: ExtElt):
        return [self.base.to_json(c) for c in a.c]

    def from_json(self, obj):
        return ExtElt(self, tuple(self.base.from_json(c) for c in obj))

    def elements(self):
        out = [()]
        base_elts = self.base.elements()
        for _ in range(self.rel_degree):
            out = [t + (b,) for t in out for b in base_elts]
        return [ExtElt(self, t) for t in out]


def prime_field_of(field):
    while isinstance(field, ExtField):
        field = field.base
    return field


# -- factorization ---------------------------------------------------------


def poly_key(f: Poly):
    """Deterministic ordering key: degree, then coefficients lowest first."""
    return (f.degree, tuple(f.field.key(c) for c in f.coeffs))


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, sorted by :func:`poly_key`."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    f = f.monic()
    if f.degree < 1:
        return []
    field = f.field
    if field.q is not None:
        out = _factor_finite(f)
    elif isinstance(field, RationalField):
        out = _factor_rational(f)
    else:
        out = _factor_trager(f)
    merged: dict = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return sorted(merged.items(), key=lambda gm: poly_key(gm[0]))


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    fs = factor(f)
    return len(fs) == 1 and fs[0][1] == 1


def _pth_root_coeff(field, c):
    # Frobenius is bijective on a finite field: c^(1/p) = c^(q/p)
    return c ** (field.q // field.characteristic)


def _squarefree_finite(f: Poly) -> list[tuple[Poly, int]]:
    field = f.field
    p = field.characteristic
    out = []
    df = f.derivative()
    if df.is_zero():
        g = Poly(field, [_pth_root_coeff(field, c) for c in f.coeffs[::p]])
        return [(h, m * p) for h, m in _squarefree_finite(g)]
    c = f.gcd(df)
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        fac = w.exact_div(y)
        if fac.degree > 0:
            out.append((fac, i))
        w = y
        c = c.exact_div(y)
        i += 1
    if c.degree > 0:
        root = Poly(field, [_pth_root_coeff(field, a) for a in c.coeffs[::p]])
        out.extend((h, m * p) for h, m in _squarefree_finite(root))
    return out


def _powmod(base: Poly, n: int, mod: Poly) -> Poly:
    result = Poly(mod.field, [mod.field.one])
    base = base % mod
    while n:
        if n & 1:
            result = (result * base) % mod
        n >>= 1
        if n:
            base = (base * base) % mod
    return result


def _ddf(f: Poly) -> list[tuple[Poly, int]]:
    field = f.field
    q = field.q
    x = Poly.x(field)
    h = x
    out = []
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = _powmod(h, q, f)
        g = f.gcd(h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f.exact_div(g)
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _edf(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    if f.degree == d:
        return [f]
    field = f.field
    q = field.q
    p = field.characteristic
    while True:
        a = Poly(field, [field.random_element(rng) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        if p == 2:
            # trace map to GF(2): a + a^2 + ... + a^(2^(k d - 1))
            k = field.degree * d
            t = a % f
            acc = t
            for _ in range(k - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = _powmod(a, (q**d - 1) // 2, f) - Poly(field, [field.one])
        g = f.gcd(b)
        if 0 < g.degree < f.degree:
            return _edf(g, d, rng) + _edf(f.exact_div(g), d, rng)


def _factor_finite(f: Poly) -> list[tuple[Poly, int]]:
    rng = random.Random(0x5EED)
    out = []
    for sf, m in _squarefree_finite(f):
        for g, d in _ddf(sf):
            for h in _edf(g, d, rng):
                out.append((h.monic(), m))
    return out


def _factor_rational(f: Poly) -> list[tuple[Poly, int]]:
    import sympy

    x = sympy.Symbol("x")
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)], x, domain="QQ")
    _c, facs = expr.factor_list()
    out = []
    for g, m in facs:
        cs = [Fraction(int(a.p), int(a.q)) for a in reversed(g.all_coeffs())]
        out.append((Poly(QQ, cs).monic(), m))
    return out


def _lift_poly(f: Poly, field) -> Poly:
    return Poly(field, [field.embed(c) for c in f.coeffs])


def _norm(g: Poly) -> Poly:
    """Norm from ``F[y]`` down to ``E[y]`` where ``F = E[z]/(m)``, by interpolation."""
    F = g.field
    E = F.base
    n = g.degree * F.rel_degree
    xs = [E.embed(i) for i in range(n + 1)]
    ys = [_det_mult(F, g(F.embed(xv))) for xv in xs]
    return _interpolate(E, xs, ys)


def _det_mult(F: "ExtField", a: ExtElt):
    # determinant of multiplication by a on the power basis of F over its base
    n = F.rel_degree
    cols = []
    b = F.one
    for _ in range(n):
        cols.append(list((a * b).c))
        b = b * F.gen
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    return _det(F.base, mat)


def _det(E, mat):
    mat = [row[:] for row in mat]
    n = len(mat)
    det = E.one
    for i in range(n):
        piv = next((r for r in range(i, n) if mat[r][i]), None)
        if piv is None:
            return E.zero
        if piv != i:
            mat[i], mat[piv] = mat[piv], mat[i]
            det = -det
        det = det * mat[i][i]
        inv = E.one / mat[i][i]
        for r in range(i + 1, n):
            if mat[r][i]:
                fct = mat[r][i] * inv
                for c in range(i, n):
                    mat[r][c] = mat[r][c] - fct * mat[i][c]
    return det


def _interpolate(E, xs, ys) -> Poly:
    result = Poly(E, [])
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        basis = Poly(E, [E.one])
        denom = E.one
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * Poly(E, [-xj, E.one])
                denom = denom * (xi - xj)
        result = result + basis * (yi / denom)
    return result


def _factor_trager(f: Poly) -> list[tuple[Poly, int]]:
    F = f.field
    E = F.base
    out = []
    # squarefree decomposition (characteristic 0)
    df = f.derivative()
    c = f.gcd(df)
    w = f.exact_div(c)
    i = 1
    parts = []
    while w.degree > 0:
        y = w.gcd(c)
        fac = w.exact_div(y)
        if fac.degree > 0:
            parts.append((fac, i))
        w = y
        c = c.exact_div(y)
        i += 1
    for sf, m in parts:
        for h in _trager_squarefree(sf, F, E):
            out.append((h.monic(), m))
    return out


def _trager_squarefree(g: Poly, F, E) -> list[Poly]:
    if g.degree == 1:
        return [g]
    z = F.gen
    for s in range(0, 50):
        # g(y - s z)
        shift = Poly(F, [-(z * s), F.one])
        gs = g(shift)
        N = _norm(gs)
        if N.gcd(N.derivative()).degree == 0:
            break
    else:
        raise ArithmeticError("no squarefree norm found")
    facs = factor(N)
    if len(facs) == 1:
        return [g]
    out = []
    back = Poly(F, [z * s, F.one])
    for Ni, _m in facs:
        h = gs.gcd(_lift_poly(Ni, F))
        out.append(h(back).monic())
    return out


def find_roots(f: Poly) -> list:
    """Roots in the coefficient field (finite fields and Q towers alike)."""
    return sorted(
        (-g.coeffs[0] for g, _m in factor(f) if g.degree == 1),
        key=lambda a: f.field.key(a) if not hasattr(a, "key") else a.key(),
    )


def product(polys, field) -> Poly:
    return reduce(lambda a, b: a * b, polys, Poly(field, [field.one]))
