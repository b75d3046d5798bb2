"""Exact real arithmetic over sums of rational multiples of square roots.

Spins are carried as *twice-spin* integers throughout the package: the spin
``j`` is stored as the non-negative int ``2j``.  Rationals are
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

TwiceSpin = int
Number = Union[int, Fraction]


def check_twice_spin(twice: int) -> int:
    if not isinstance(twice, int) or isinstance(twice, bool) or twice < 0:
        raise ValueError(f"twice-spin must be a non-negative integer, got {twice!r}")
    return twice


def parse_spin(text: str) -> TwiceSpin:
    """Parse ``"3/2"``, ``"1"`` or ``"0.5"`` into a twice-spin integer."""
    value = Fraction(text.strip())
    twice = 2 * value
    if twice.denominator != 1 or twice < 0:
        raise ValueError(f"not a non-negative half-integer: {text!r}")
    return int(twice)


def format_spin(twice: TwiceSpin) -> str:
    return str(twice // 2) if twice % 2 == 0 else f"{twice}/2"


@lru_cache(maxsize=4096)
def square_free_split(m: int) -> tuple[int, int]:
    """Return ``(outer, core)`` with ``m == outer**2 * core`` and ``core`` square-free."""
    if m < 1:
        raise ValueError(f"radicand must be a positive integer, got {m}")
    outer, core = 1, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            outer *= p ** (e // 2)
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    return outer, core * m


@lru_cache(maxsize=None)
def factorial(k: int) -> int:
    # memo table shared by every Racah evaluation in the process
    return math.factorial(k)


class SurdSum:
    """An exact real number ``sum(coeff * sqrt(radicand))``.

    Radicands are square-free and no coefficient is zero, so two instances
    represent the same real number exactly when their term maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        clean: dict[int, Fraction] = {}
        for r, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            outer, core = square_free_split(r)
            c *= outer
            total = clean.get(core, 0) + c
            if total:
                clean[core] = total
            else:
                clean.pop(core, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "SurdSum":
        # caller guarantees square-free radicands and nonzero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, value: Number) -> "SurdSum":
        value = Fraction(value)
        return cls._raw({1: value} if value else {})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SurdSum.rational(other)
        if not isinstance(other, SurdSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "SurdSum":
        return SurdSum._raw({r: -c for r, c in self._terms.items()})

    def __add__(self, other: "SurdSum | Number") -> "SurdSum":
        if not isinstance(other, SurdSum):
            other = SurdSum.rational(other)
        out = dict(self._terms)
        for r, c in other._terms.items():
            total = out.get(r, 0) + c
            if total:
                out[r] = total
            else:
                del out[r]
        return SurdSum._raw(out)

    __radd__ = __add__

    def __sub__(self, other: "SurdSum | Number") -> "SurdSum":
        if not isinstance(other, SurdSum):
            other = SurdSum.rational(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> "SurdSum":
        return SurdSum.rational(other) - self

    def __mul__(self, other: "SurdSum | Number") -> "SurdSum":
        if not isinstance(other, SurdSum):
            other = Fraction(other)
            if not other:
                return ZERO
            return SurdSum._raw({r: c * other for r, c in self._terms.items()})
        out: dict[int, Fraction] = {}
        for r, c in self._terms.items():
            for s, d in other._terms.items():
                # sqrt(r) * sqrt(s) = g * sqrt(r*s/g^2) for square-free r, s
                g = math.gcd(r, s)
                core = (r // g) * (s // g)
                total = out.get(core, 0) + c * d * g
                if total:
                    out[core] = total
                else:
                    del out[core]
        return SurdSum._raw(out)

    __rmul__ = __mul__

    def approx(self, precision_bits: int) -> tuple[Fraction, Fraction]:
        """Rational approximation and a guaranteed absolute error bound.

        Each square root is rounded to the nearest multiple of
        ``2**-precision_bits``, so the bound is ``sum(|coeff|) * 2**-(precision_bits + 1)``.
        """
        if precision_bits < 1:
            raise ValueError("precision_bits must be positive")
        scale = 1 << precision_bits
        value = Fraction(0)
        bound = Fraction(0)
        for r, c in self._terms.items():
            if r == 1:
                value += c
                continue
            target = r << (2 * precision_bits)
            root = math.isqrt(target)
            # round up when sqrt(target) >= root + 1/2
            if 4 * target >= (2 * root + 1) ** 2:
                root += 1
            value += c * Fraction(root, scale)
            bound += abs(c)
        return value, bound / (2 * scale)

    def __float__(self) -> float:
        return self.to_float(64)[0]

    def to_float(self, precision_bits: int = 64) -> tuple[float, float]:
        """Nearest double and an absolute error bound covering the final rounding too.

        ``precision_bits`` is a floor on the working precision; at least 80
        bits are used so that the double is the correctly rounded value
        outside of near-tie cases.
        """
        if precision_bits < 16:
            raise ValueError("precision_bits must be at least 16")
        value, bound = self.approx(max(precision_bits, 80))
        f = float(value)
        total = bound + abs(Fraction(f) - value)
        return f, _round_up(total)

    def to_json(self) -> dict:
        return {
            "terms": [
                {"radicand": r, "num": str(c.numerator), "den": str(c.denominator)}
                for r, c in self.items()
            ],
            "float": float(self),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SurdSum":
        return cls({int(t["radicand"]): Fraction(int(t["num"]), int(t["den"])) for t in doc["terms"]})

    def __repr__(self) -> str:
        if not self._terms:
            return "SurdSum(0)"
        parts = []
        for r, c in self.items():
            parts.append(str(c) if r == 1 else f"{c}*sqrt({r})")
        return "SurdSum(" + " + ".join(parts) + ")"


def _round_up(x: Fraction) -> float:
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


ZERO = SurdSum._raw({})
ONE = SurdSum._raw({1: Fraction(1)})


def surd_normalize(coefficient: Number, radicand: int) -> SurdSum:
    """``coefficient * sqrt(radicand)`` with the radicand reduced to square-free form."""
    if not isinstance(radicand, int) or radicand < 1:
        raise ValueError(f"invalid surd: radicand must be a positive integer, got {radicand!r}")
    return SurdSum({radicand: coefficient})


def sqrt_rational(q: Number) -> SurdSum:
    """Exact ``sqrt(q)`` for a non-negative rational ``q``."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if not q:
        return ZERO
    # sqrt(p/d) = sqrt(p*d) / d
    return surd_normalize(Fraction(1, q.denominator), q.numerator * q.denominator)


def surd_add(a: SurdSum, b: SurdSum) -> SurdSum:
    return a + b


def surd_mul(a: SurdSum, b: SurdSum) -> SurdSum:
    return a * b


def surd_to_float(a: SurdSum, precision_bits: int = 64) -> tuple[float, float]:
    return a.to_float(precision_bits)


def surd_sum(values: Iterable[SurdSum]) -> SurdSum:
    out: dict[int, Fraction] = {}
    for v in values:
        for r, c in v._terms.items():
            total = out.get(r, 0) + c
            if total:
                out[r] = total
            else:
                del out[r]
    return SurdSum._raw(out)


def sign_power(exponent: int) -> int:
    """``(-1) ** exponent`` for an integer exponent."""
    return -1 if exponent % 2 else 1
