"""Homographies ``x -> (ax + b) / (cx + d)`` over Q or Q(sqrt k)."""

import enum
from fractions import Fraction
from math import gcd, lcm

from .errors import ParseError, PoleAtPoint, ValidationError
from .scalar import (INF, ProjPoint, Quad, as_scalar, format_scalar,
                     normalize_point, parse_scalar, sign, sqrt_in_field)

__all__ = [
    "Homography",
    "IDENTITY",
    "SpecialFixedSet",
    "affine",
    "compose",
    "inverse",
    "apply",
    "derivative_at",
    "chart_derivative",
    "fixed_points",
    "is_affine",
    "orientation",
    "parse_homography",
]


def _canonical_entries(entries):
    lead = next(e for e in entries if e != 0)
    if all(not isinstance(e, Quad) for e in entries):
        fr = [Fraction(e) for e in entries]
        m = lcm(*(f.denominator for f in fr))
        ints = [int(f * m) for f in fr]
        g = 0
        for v in ints:
            g = gcd(g, v)
        s = 1 if sign(lead) > 0 else -1
        return tuple(s * v // g for v in ints)
    scaled = [e / lead for e in entries]
    if all(not isinstance(e, Quad) for e in scaled):
        return _canonical_entries(scaled)
    return tuple(scaled)


class Homography:
    """An element of PGL_2, stored in canonical scaling.

    Rational matrices are kept integral with content 1 and positive first
    nonzero entry; matrices with surd entries are scaled so that the first
    nonzero entry is 1.
    """

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a, b, c, d):
        entries = tuple(v if isinstance(v, (int, Quad)) else as_scalar(v)
                        for v in (a, b, c, d))
        if entries[0] * entries[3] - entries[1] * entries[2] == 0:
            raise ValidationError(f"singular matrix [{a},{b};{c},{d}]")
        self.a, self.b, self.c, self.d = _canonical_entries(entries)
        self._hash = None

    @classmethod
    def _raw(cls, a, b, c, d):
        h = object.__new__(cls)
        h.a, h.b, h.c, h.d = a, b, c, d
        h._hash = None
        return h

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __eq__(self, other):
        if not isinstance(other, Homography):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __call__(self, x):
        return apply(self, x)

    def __matmul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"Homography({self})"

    def __str__(self):
        a, b, c, d = (format_scalar(v) for v in self.entries)
        return f"[{a},{b};{c},{d}]"


IDENTITY = Homography(1, 0, 0, 1)


def affine(p, q):
    """The affine map ``x -> p x + q``."""
    return Homography(p, q, 0, 1)


def compose(g, h):
    """``g o h`` (apply ``h`` first)."""
    return Homography(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                      g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d)


def inverse(g):
    return Homography(g.d, -g.b, -g.c, g.a)


def apply(g, x):
    return normalize_point(g.a * x.p + g.b * x.q, g.c * x.p + g.d * x.q)


def orientation(g):
    """+1 if ``g`` preserves the circular order of P^1, -1 if it reverses it."""
    return sign(g.det)


def is_affine(g):
    return g.c == 0


def derivative_at(g, x):
    """Derivative of ``g`` at a finite point in the standard affine chart."""
    if x.is_inf:
        raise PoleAtPoint("derivative at inf needs chart_derivative")
    den = g.c * x.p + g.d
    if den == 0:
        raise PoleAtPoint(f"{g} sends {x} to inf")
    return g.det / (den * den)


_J = Homography(0, 1, 1, 0)


def chart_derivative(g, x):
    """Derivative of ``g`` at ``x`` using the chart ``u = 1/x`` around inf.

    The source chart is the identity unless ``x`` is inf; likewise for the
    target chart at ``g(x)``.
    """
    y = apply(g, x)
    h = g
    if x.is_inf:
        h = compose(h, _J)
        x = ProjPoint(Fraction(0))
    if y.is_inf:
        h = compose(_J, h)
    return derivative_at(h, x)


class SpecialFixedSet(enum.Enum):
    ALL_POINTS = "AllPoints"
    NOT_IN_FIELD = "NotInField"


def fixed_points(g):
    """Fixed points of ``g`` as a frozenset, or a :class:`SpecialFixedSet`."""
    a, b, c, d = g.entries
    if c == 0:
        if a == d:
            return SpecialFixedSet.ALL_POINTS if b == 0 else frozenset({INF})
        return frozenset({INF, ProjPoint(as_scalar(b) / (d - a))})
    # c x^2 + (d - a) x - b = 0
    disc = (d - a) * (d - a) + 4 * b * c
    s = sign(disc)
    if s < 0:
        return frozenset()
    if s == 0:
        return frozenset({ProjPoint(as_scalar(a - d) / (2 * c))})
    k = next((e.k for e in g.entries if isinstance(e, Quad)), None)
    r = sqrt_in_field(disc, k)
    if r is None:
        return SpecialFixedSet.NOT_IN_FIELD
    return frozenset({ProjPoint((a - d + r) / (2 * c)),
                      ProjPoint((a - d - r) / (2 * c))})


def parse_homography(text, sqrt=None, column=1):
    """Parse ``[a,b;c,d]`` (brackets optional)."""
    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    rows = t.split(";")
    if len(rows) != 2:
        raise ParseError(f"expected 'a,b;c,d', got {text!r}", 1, column)
    vals = []
    for row in rows:
        parts = row.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected two entries per row in {text!r}", 1, column)
        vals.extend(parse_scalar(p, sqrt, column) for p in parts)
    try:
        return Homography(*vals)
    except ValidationError as exc:
        raise ParseError(str(exc), 1, column) from None
