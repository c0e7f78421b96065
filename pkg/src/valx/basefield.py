"""Valued base fields (K, nu) with exact scalars.

Three desk-scale models are supported:

* ``qp``  -- Q with the p-adic valuation, scalars are ``Fraction``;
* ``fpt`` -- GF(p)(t) with the t-adic valuation;
* ``qt``  -- Q(t) with the t-adic valuation.

All have value group Z and residue field GF(p) or Q.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .residue import QQ, FpElt, PrimeField, is_prime
from .values import INF, Value


class RatFunc:
    """Reduced fraction ``num/den`` of polynomials in t, ``den`` monic."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced: bool = False):
        k = num.field
        if den is None:
            den = Poly(k, [k.one])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly(k, [k.one])
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lc = den.lc
                if lc != k.one:
                    inv = k.one / lc
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den
        self._h = None

    @property
    def k(self):
        return self.num.field

    def _other(self, o):
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, (int, Fraction, FpElt)):
            return RatFunc(Poly(self.k, [o]), _reduced=True) if o else RatFunc(Poly(self.k, []), _reduced=True)
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return RatFunc(Poly(self.k, []), _reduced=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

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
        return RatFunc(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, o):
        if isinstance(o, RatFunc):
            return self.num == o.num and self.den == o.den
        if isinstance(o, (int, Fraction, FpElt)):
            return self.den.degree == 0 and self.num == o
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if self.den.degree == 0 and self.num.degree <= 0:
                c = self.num[0]
                self._h = hash(c.v if isinstance(c, FpElt) else c)
            else:
                self._h = hash((self.num, self.den))
        return self._h

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return str(self)

    def __str__(self):
        n = self.num.format("t")
        if self.den.degree == 0:
            return n
        if self.num.degree > 0 and len([c for c in self.num.coeffs if c]) > 1:
            n = f"({n})"
        return f"{n}/({self.den.format('t')})"


def _ord_t(f: Poly) -> int:
    for i, c in enumerate(f.coeffs):
        if c:
            return i
    raise ValueError("order of the zero polynomial")


def _vp(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class BaseField:
    """A valued field (K, nu) usable as a :class:`Poly` coefficient field."""

    KINDS = ("qp", "fpt", "qt")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown base field kind {kind!r}")
        if kind in ("qp", "fpt"):
            if p is None or not is_prime(int(p)):
                raise ValueError(f"{kind} needs a prime, got {p!r}")
            p = int(p)
        else:
            p = None
        self.kind = kind
        self.p = p
        if kind == "qp":
            self.characteristic = 0
            self.residue_field = PrimeField(p)
            self.zero = Fraction(0)
            self.one = Fraction(1)
            self._coeff_field = None
        else:
            k = PrimeField(p) if kind == "fpt" else QQ
            self._coeff_field = k
            self.characteristic = p if kind == "fpt" else 0
            self.residue_field = k
            self.zero = RatFunc(Poly(k, []), _reduced=True)
            self.one = RatFunc(Poly(k, [k.one]), _reduced=True)

    @classmethod
    def qp(cls, p: int) -> "BaseField":
        return cls("qp", p)

    @classmethod
    def fpt(cls, p: int) -> "BaseField":
        return cls("fpt", p)

    @classmethod
    def qt(cls) -> "BaseField":
        return cls("qt")

    def __eq__(self, other):
        return isinstance(other, BaseField) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"BaseField({self.kind!r}, {self.p!r})" if self.p else f"BaseField({self.kind!r})"

    def __reduce__(self):
        return (BaseField, (self.kind, self.p))

    @property
    def name(self) -> str:
        return {"qp": f"(Q, v_{self.p})", "fpt": f"(GF({self.p})(t), v_t)", "qt": "(Q(t), v_t)"}[self.kind]

    def to_json(self):
        out = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        return out

    @classmethod
    def from_json(cls, obj) -> "BaseField":
        return cls(obj["kind"], obj.get("p"))

    # -- scalars ---------------------------------------------------------

    def embed(self, x):
        if self.kind == "qp":
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            raise TypeError(f"cannot embed {x!r} in {self.name}")
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction, FpElt)):
            k = self._coeff_field
            return RatFunc(Poly(k, [k.embed(x)]), _reduced=True)
        raise TypeError(f"cannot embed {x!r} in {self.name}")

    @property
    def uniformizer(self):
        if self.kind == "qp":
            return Fraction(self.p)
        k = self._coeff_field
        return RatFunc(Poly(k, [k.zero, k.one]), _reduced=True)

    def t(self):
        if self.kind == "qp":
            raise ValueError("t is not defined over Q")
        return self.uniformizer

    def pi_power(self, n: int):
        n = int(n)
        if self.kind == "qp":
            return Fraction(self.p) ** n
        k = self._coeff_field
        mono = Poly.monomial(k, abs(n))
        one = Poly(k, [k.one])
        return RatFunc(mono, one, _reduced=True) if n >= 0 else RatFunc(one, mono, _reduced=True)

    def nu(self, s) -> Value:
        """Exact valuation; ``nu(0) = INF``."""
        s = self.embed(s)
        if not s:
            return INF
        if self.kind == "qp":
            return Fraction(_vp(s.numerator, self.p) - _vp(s.denominator, self.p))
        return Fraction(_ord_t(s.num) - _ord_t(s.den))

    def residue(self, s):
        """Image in the residue field of a scalar of valuation 0."""
        s = self.embed(s)
        if self.nu(s) != 0:
            raise ValueError(f"residue needs a unit, nu({s}) = {self.nu(s)}")
        if self.kind == "qp":
            return self.residue_field.embed(s)
        return s.num[0] / s.den[0]

    def lift(self, r):
        """Canonical lift of a residue (integer in [0, p) or the rational itself)."""
        r = self.residue_field.embed(r)
        if self.kind == "qp":
            return Fraction(r.v)
        return self.embed(r)

    def unit_residue(self, s):
        """Residue of ``s / pi^nu(s)``."""
        s = self.embed(s)
        return self.residue(s * self.pi_power(-int(self.nu(s))))

    def format_scalar(self, s) -> str:
        return str(self.embed(s))

    def scalar_key(self, s):
        s = self.embed(s)
        if self.kind == "qp":
            return (s.numerator, s.denominator)
        k = self._coeff_field
        return (tuple(k.key(c) for c in s.num.coeffs), tuple(k.key(c) for c in s.den.coeffs))

    def poly(self, coeffs) -> Poly:
        return Poly(self, coeffs)

    def x(self) -> Poly:
        return Poly.x(self)
