"""Triangle coefficients, Wigner 6j symbols and the two primitive tensors.

Every argument is a twice-spin integer.  The 6j layout follows the usual
``{a b f; c e d}`` convention whose four triads are ``(a, b, f)``,
``(a, e, d)``, ``(c, b, d)`` and ``(c, e, f)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import ONE, ZERO, SurdSum, TwiceSpin, factorial, sign_power, sqrt_rational, surd_sum


class DomainError(ValueError):
    """Raised when spins violate the angular-momentum addition rules."""


def triangle_admissible(a: TwiceSpin, b: TwiceSpin, c: TwiceSpin) -> bool:
    """Integer total and triangle inequality for the spins ``a/2, b/2, c/2``."""
    if a < 0 or b < 0 or c < 0:
        return False
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def coupled_range(a: TwiceSpin, b: TwiceSpin) -> range:
    """All twice-spins ``c`` with ``(a, b, c)`` admissible."""
    return range(abs(a - b), a + b + 1, 2)


@lru_cache(maxsize=None)
def _delta_squared(a: int, b: int, c: int) -> Fraction:
    return Fraction(
        factorial((a + b - c) // 2) * factorial((a - b + c) // 2) * factorial((-a + b + c) // 2),
        factorial((a + b + c) // 2 + 1),
    )


def delta_coeff(a: TwiceSpin, b: TwiceSpin, c: TwiceSpin) -> SurdSum:
    """The triangle coefficient sqrt(Delta(a, b, c))."""
    if not triangle_admissible(a, b, c):
        raise DomainError(f"inadmissible triple (2j) = ({a}, {b}, {c})")
    return sqrt_rational(_delta_squared(a, b, c))


def _racah_sum(a: int, b: int, f: int, c: int, e: int, d: int) -> Fraction:
    lows = ((a + b + f) // 2, (a + e + d) // 2, (c + b + d) // 2, (c + e + f) // 2)
    highs = ((a + b + c + e) // 2, (b + f + e + d) // 2, (f + a + d + c) // 2)
    total = Fraction(0)
    for t in range(max(lows), min(highs) + 1):
        den = 1
        for s in lows:
            den *= factorial(t - s)
        for s in highs:
            den *= factorial(s - t)
        total += Fraction(sign_power(t) * factorial(t + 1), den)
    return total


@lru_cache(maxsize=None)
def sixj(a: TwiceSpin, b: TwiceSpin, f: TwiceSpin, c: TwiceSpin, e: TwiceSpin, d: TwiceSpin) -> SurdSum:
    """Exact Wigner 6j symbol ``{a b f; c e d}`` by the Racah sum; zero if any triad fails."""
    triads = ((a, b, f), (a, e, d), (c, b, d), (c, e, f))
    if not all(triangle_admissible(*t) for t in triads):
        return ZERO
    prefactor = ONE
    for t in triads:
        prefactor = prefactor * delta_coeff(*t)
    return prefactor * _racah_sum(a, b, f, c, e, d)


def recoupling_tensor(a: TwiceSpin, b: TwiceSpin, f: TwiceSpin, c: TwiceSpin, e: TwiceSpin, d: TwiceSpin) -> SurdSum:
    """``[a b f; c e d] = (-1)^(a+b+c+e) sqrt((2d+1)(2f+1)) {a b f; c e d}``.

    This is the overlap between ``|(a b) f, c; e>`` and ``|a, (b c) d; e>``,
    i.e. the matrix element of re-associating three coupled subsystems.
    """
    value = sixj(a, b, f, c, e, d)
    if not value:
        return ZERO
    # a+b+c+e is integral whenever (a,b,f) and (c,e,f) are admissible
    phase = sign_power((a + b + c + e) // 2)
    return value * (phase * SurdSum({(d + 1) * (f + 1): 1}))


def twist_phase(j1: TwiceSpin, j2: TwiceSpin, j: TwiceSpin) -> SurdSum:
    """``(-1)^(j1+j2-j)``: the sign picked up when two coupled subsystems are exchanged."""
    if not triangle_admissible(j1, j2, j):
        raise DomainError(f"inadmissible triple (2j) = ({j1}, {j2}, {j})")
    return SurdSum.rational(sign_power((j1 + j2 - j) // 2))


def biedenharn_elliott_residual(
    a: TwiceSpin, b: TwiceSpin, c: TwiceSpin, d: TwiceSpin, e: TwiceSpin,
    f: TwiceSpin, g: TwiceSpin, h: TwiceSpin, j: TwiceSpin,
) -> SurdSum:
    """LHS minus RHS of the Biedenharn-Elliott identity; identically zero."""
    terms = []
    base = a + b + c + d + e + f + g + h + j
    xs = set(coupled_range(a, b)) & set(coupled_range(c, d)) & set(coupled_range(e, f))
    for x in sorted(xs):
        product = sixj(a, b, x, c, d, g) * sixj(c, d, x, e, f, h) * sixj(e, f, x, b, a, j)
        if not product:
            continue
        phi = base + x
        if phi % 2:
            raise AssertionError("non-integral phase in a nonzero Biedenharn-Elliott term")
        terms.append(product * (sign_power(phi // 2) * (x + 1)))
    rhs = sixj(g, h, j, e, a, d) * sixj(g, h, j, f, b, c)
    return surd_sum(terms) - rhs


_TETRAHEDRAL_COLUMN_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def tetrahedral_images(a: int, b: int, f: int, c: int, e: int, d: int) -> list[tuple[int, ...]]:
    """The 24 argument tuples related to ``{a b f; c e d}`` by tetrahedral symmetry."""
    cols = [(a, c), (b, e), (f, d)]
    out = []
    for perm in _TETRAHEDRAL_COLUMN_PERMS:
        permuted = [cols[i] for i in perm]
        # swap upper/lower in an even number of columns
        for flips in ((), (0, 1), (0, 2), (1, 2)):
            upper, lower = [], []
            for k, (u, l) in enumerate(permuted):
                if k in flips:
                    u, l = l, u
                upper.append(u)
                lower.append(l)
            out.append((upper[0], upper[1], upper[2], lower[0], lower[1], lower[2]))
    return out
