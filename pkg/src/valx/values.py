"""Ordered values: exact rationals together with a top element ``INF``.

Finite values are :class:`fractions.Fraction` instances (always reduced, with
positive denominator).  ``INF`` absorbs addition and dominates every finite
value.  Finitely generated subgroups of Q are cyclic and are modelled by
:class:`ValueGroup`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("valx-infinity")

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            raise ValueError("0 * INF is undefined")
        if other < 0:
            raise ValueError("negative multiples of INF are not values")
        return self

    __rmul__ = __mul__

    def __neg__(self):
        raise ValueError("-INF is not a value")


INF = _Infinity()

Value = Union[Fraction, _Infinity]


def is_inf(v) -> bool:
    return v is INF


def value(x) -> Value:
    """Coerce ``x`` (int, Fraction, str or INF) to a value."""
    if x is INF:
        return INF
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "+inf", "infinity", "oo"):
            return INF
        return Fraction(s)
    return Fraction(x)


def value_add(a: Value, b: Value) -> Value:
    if a is INF or b is INF:
        return INF
    return a + b


def value_to_json(v: Value):
    if v is INF:
        return "inf"
    return {"num": v.numerator, "den": v.denominator}


def value_from_json(obj) -> Value:
    if obj == "inf":
        return INF
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, (int, str)):
        return value(obj)
    raise ValueError(f"not a serialized value: {obj!r}")


def format_value(v: Value) -> str:
    return "inf" if v is INF else str(v)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    # gcd(n1/d1, n2/d2) = gcd(n1*d2, n2*d1) / (d1*d2)
    num = gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


@dataclass(frozen=True)
class ValueGroup:
    """The subgroup ``generator * Z`` of Q; ``generator == 0`` is the trivial group."""

    generator: Fraction

    def __post_init__(self):
        g = Fraction(self.generator)
        if g < 0:
            g = -g
        object.__setattr__(self, "generator", g)

    @classmethod
    def integers(cls) -> "ValueGroup":
        return cls(Fraction(1))

    @classmethod
    def trivial(cls) -> "ValueGroup":
        return cls(Fraction(0))

    @property
    def is_trivial(self) -> bool:
        return self.generator == 0

    def __contains__(self, v) -> bool:
        if v is INF:
            return False
        v = Fraction(v)
        if self.is_trivial:
            return v == 0
        return (v / self.generator).denominator == 1

    def adjoin(self, gamma: Value) -> "ValueGroup":
        return group_adjoin(self, gamma)

    def __repr__(self):
        if self.is_trivial:
            return "ValueGroup(0)"
        return f"ValueGroup({self.generator})"


def group_adjoin(group: ValueGroup, gamma: Value) -> ValueGroup:
    """Subgroup of Q generated by ``group`` and ``gamma``."""
    if gamma is INF:
        raise ValueError("cannot adjoin INF to a value group")
    gamma = Fraction(gamma)
    if gamma == 0:
        return group
    if group.is_trivial:
        return ValueGroup(abs(gamma))
    return ValueGroup(_frac_gcd(group.generator, abs(gamma)))


def group_index(small: ValueGroup, big: ValueGroup) -> int:
    """Index ``[big : small]``; raises ``ValueError`` unless ``small`` is inside ``big``."""
    if small.is_trivial:
        if big.is_trivial:
            return 1
        raise ValueError("trivial group has infinite index in a nontrivial group")
    if big.is_trivial or small.generator not in big:
        raise ValueError(f"{small} is not contained in {big}")
    ratio = small.generator / big.generator
    return ratio.numerator
