"""Coefficient domains: exact rationals and large prime fields.

Rational coefficients are plain ``int`` when integral and ``fractions.Fraction``
otherwise; both interoperate transparently, and keeping the integer fast path
matters in the symbolic-determinant kernels.  Prime-field coefficients are
``GFElement`` instances that carry their modulus.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import FieldMismatchError

# Default modulus for probabilistic identity testing: the Mersenne prime 2^61 - 1.
DEFAULT_PRIME = (1 << 61) - 1

RATIONAL = "rational"


class GFElement:
    """An element of GF(p), stored in canonical range [0, p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.modulus != self.modulus:
                raise FieldMismatchError(
                    f"moduli differ: {self.modulus} vs {other.modulus}"
                )
            return other
        if isinstance(other, int):
            return GFElement(other, self.modulus)
        if isinstance(other, Fraction):
            return GFElement(
                other.numerator * pow(other.denominator, -1, self.modulus),
                self.modulus,
            )
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(other.value - self.value, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(self.value * pow(other.value, -1, self.modulus), self.modulus)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GFElement(other.value * pow(self.value, -1, self.modulus), self.modulus)

    def __pow__(self, e):
        return GFElement(pow(self.value, e, self.modulus), self.modulus)

    def __neg__(self):
        return GFElement(-self.value, self.modulus)

    def __abs__(self):
        return self

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"GF({self.value} mod {self.modulus})"

    def __str__(self):
        return str(self.value)


def field_of(c):
    """Return the field tag of a coefficient: RATIONAL or the GF modulus."""
    if isinstance(c, GFElement):
        return c.modulus
    return RATIONAL


def same_field(a, b):
    return field_of(a) == field_of(b)


def norm_coeff(c):
    """Collapse integral Fractions to int; leave everything else alone."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def coeff_div(a, b):
    """Exact division of coefficients in their common field."""
    if isinstance(a, GFElement) or isinstance(b, GFElement):
        if isinstance(a, GFElement):
            return a / b
        return GFElement(a, b.modulus) / b
    return norm_coeff(Fraction(a) / Fraction(b))


def rational_to_mod(c, p):
    """Reduce an int or Fraction to GF(p) via modular inverse of the denominator."""
    if isinstance(c, int):
        return c % p
    if c.denominator % p == 0:
        raise FieldMismatchError(f"denominator divisible by modulus {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def rational_content(coeffs):
    """Positive rational c such that dividing the coefficients by c leaves
    coprime integers.  Input must be nonempty rational coefficients."""
    nums, dens = [], []
    for c in coeffs:
        f = c if isinstance(c, Fraction) else Fraction(c)
        nums.append(abs(f.numerator))
        dens.append(f.denominator)
    g = 0
    for n in nums:
        g = math.gcd(g, n)
    l = 1
    for d in dens:
        l = l * d // math.gcd(l, d)
    return Fraction(g, l)


def substream(seed, *labels):
    """Deterministic named RNG substream derived from one master seed.

    Labels keep draws independent between modules, instances, and trials,
    so adding samples to one consumer never shifts another's stream.
    """
    return random.Random(f"{seed}::" + "/".join(str(x) for x in labels))
