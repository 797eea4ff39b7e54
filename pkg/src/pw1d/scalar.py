"""Exact scalars and points of the projective line.

Scalars are plain :class:`fractions.Fraction` (or ``int``) in rational
mode.  In quadratic mode they may also be :class:`Quad` values ``a + b*rt``
with ``rt`` the square root of a fixed squarefree integer ``k > 1``.  A
``Quad`` whose surd part vanishes always collapses back to a ``Fraction``,
so equality and hashing never depend on how a value was computed.
"""

from fractions import Fraction
from math import isqrt

from .errors import DegenerateTriple, ParseError, SurdMismatch, ZeroVector

__all__ = [
    "Quad",
    "quad",
    "as_scalar",
    "sign",
    "floor",
    "is_rational",
    "sqrt_in_field",
    "squarefree",
    "ProjPoint",
    "INF",
    "point",
    "normalize_point",
    "circular_order",
    "interior_point",
    "parse_scalar",
    "format_scalar",
    "parse_point",
    "format_point",
]

_RATIONAL = (int, Fraction)


def squarefree(k):
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % (d * d) == 0:
            return False
        d += 1
    return True


class Quad:
    """An element ``a + b*sqrt(k)`` of a real quadratic field, ``b != 0``."""

    __slots__ = ("a", "b", "k")

    def __init__(self, a, b, k):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.k = k

    # -- coercion ---------------------------------------------------------
    def _parts(self, other):
        if isinstance(other, Quad):
            if other.k != self.k:
                raise SurdMismatch(f"cannot mix sqrt({self.k}) and sqrt({other.k})")
            return other.a, other.b
        if isinstance(other, _RATIONAL):
            return Fraction(other), Fraction(0)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quad(self.a + p[0], self.b + p[1], self.k)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.k)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quad(self.a - p[0], self.b - p[1], self.k)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quad(p[0] - self.a, p[1] - self.b, self.k)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        return quad(self.a * c + self.b * d * self.k, self.a * d + self.b * c, self.k)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.b * self.b * self.k

    def conjugate(self):
        return Quad(self.a, -self.b, self.k)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        if d == 0:
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return Quad(self.a / c, self.b / c, self.k)
        n = c * c - d * d * self.k
        return self * quad(c / n, -d / n, self.k)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        n = self.norm()
        return quad(p[0], p[1], self.k) * quad(self.a / n, -self.b / n, self.k)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / self ** (-n)
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Quad):
            return (self.a, self.b, self.k) == (other.a, other.b, other.k)
        return False  # b != 0, so never rational

    def __hash__(self):
        return hash((self.a, self.b, self.k))

    def _cmp(self, other):
        p = self._parts(other)
        if p is None:
            return None
        return sign(self - quad(p[0], p[1], self.k))

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return True

    def __float__(self):
        return float(self.a) + float(self.b) * self.k ** 0.5

    def __floor__(self):
        return floor(self)

    def __repr__(self):
        return f"Quad({format_scalar(self)}, k={self.k})"


def quad(a, b, k):
    """Build ``a + b*sqrt(k)``, collapsing to a Fraction when ``b == 0``."""
    if b == 0:
        return Fraction(a)
    if not isinstance(k, int) or not squarefree(k):
        raise SurdMismatch(f"surd base {k!r} is not a squarefree integer > 1")
    return Quad(a, b, k)


def as_scalar(x):
    if isinstance(x, Quad):
        return x
    return Fraction(x)


def is_rational(x):
    return not isinstance(x, Quad)


def _sign_rational(x):
    return (x > 0) - (x < 0)


def sign(x):
    """Exact sign of a scalar: -1, 0 or 1."""
    if not isinstance(x, Quad):
        return _sign_rational(x)
    sa, sb = _sign_rational(x.a), _sign_rational(x.b)
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 k
    d = x.a * x.a - x.b * x.b * x.k
    return sa if d > 0 else sb


def floor(x):
    """Exact floor of a scalar as an ``int``."""
    if not isinstance(x, Quad):
        return x.numerator // x.denominator if isinstance(x, Fraction) else int(x)
    # b*sqrt(k) = +-sqrt(n/d) = +-sqrt(n*d)/d
    bb = x.b * x.b * x.k
    n, d = bb.numerator, bb.denominator
    r = isqrt(n * d)
    approx = x.a + (Fraction(r, d) if x.b > 0 else -Fraction(r, d))
    m = approx.numerator // approx.denominator
    while m > x:
        m -= 1
    while m + 1 <= x:
        m += 1
    return m


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_in_field(x, k=None):
    """Square root of ``x`` inside Q or Q(sqrt k); ``None`` if it does not exist.

    ``x`` must be non-negative.  The returned root is non-negative.
    """
    if isinstance(x, Quad):
        k = x.k
        A, B = x.a, x.b
    else:
        A, B = Fraction(x), Fraction(0)
    if B == 0:
        r = _rational_sqrt(A)
        if r is not None:
            return r
        if k is None:
            return None
        v = _rational_sqrt(A / k)
        return None if v is None else Quad(0, v, k)
    # (u + v rt)^2 = A + B rt  =>  u^2 = (A +- sqrt(A^2 - k B^2)) / 2
    s = _rational_sqrt(A * A - k * B * B)
    if s is None:
        return None
    for u2 in ((A + s) / 2, (A - s) / 2):
        u = _rational_sqrt(u2)
        if u:
            v = B / (2 * u)
            root = quad(u, v, k)
            return root if sign(root) >= 0 else -root
    return None


class ProjPoint:
    """A point ``[p : q]`` of the projective line in canonical form.

    Either ``q == 1`` (a finite point ``p``) or ``(p, q) == (1, 0)``.
    """

    __slots__ = ("p", "q")

    def __init__(self, p, q=1):
        self.p = p
        self.q = q

    @property
    def is_inf(self):
        return self.q == 0

    @property
    def value(self):
        """The affine coordinate, or ``None`` at infinity."""
        return None if self.q == 0 else self.p

    @property
    def key(self):
        # linear order on R u {inf}, inf largest
        return (1, 0) if self.q == 0 else (0, self.p)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.q == other.q and self.p == other.p

    def __hash__(self):
        return hash((self.p, self.q))

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"ProjPoint({format_point(self)})"

    def __str__(self):
        return format_point(self)


INF = ProjPoint(Fraction(1), 0)


def normalize_point(p, q):
    """Canonical representative of the homogeneous vector ``(p, q)``."""
    if q == 0:
        if p == 0:
            raise ZeroVector("(0, 0) is not a point of the projective line")
        return INF
    return ProjPoint(as_scalar(p) / q if q != 1 else as_scalar(p), 1)


def point(x):
    """Coerce a scalar, ``None`` / ``"inf"`` or a ProjPoint to a ProjPoint."""
    if isinstance(x, ProjPoint):
        return x
    if x is None or (isinstance(x, str) and x.strip() == "inf"):
        return INF
    if isinstance(x, str):
        return parse_point(x)
    return ProjPoint(as_scalar(x), 1)


def circular_order(x, y, z):
    """True iff ``x, y, z`` are met in this order going positively around P^1."""
    kx, ky, kz = x.key, y.key, z.key
    if kx == ky or ky == kz or kx == kz:
        raise DegenerateTriple(f"points not distinct: {x}, {y}, {z}")
    return (kx < ky < kz) or (ky < kz < kx) or (kz < kx < ky)


def interior_point(a, b):
    """Some point strictly inside the positive arc from ``a`` to ``b``.

    ``a == b`` denotes the full circle minus ``a``.
    """
    if a.is_inf:
        if b.is_inf:
            return ProjPoint(Fraction(0))
        return ProjPoint(b.p - 1)
    if b.is_inf or a == b:
        return ProjPoint(a.p + 1)
    if a.p < b.p:
        return ProjPoint((a.p + b.p) / 2)
    return ProjPoint(a.p + 1)


# -- text grammar ---------------------------------------------------------

def format_scalar(x):
    if isinstance(x, Quad):
        a = format_scalar(x.a)
        b = x.b
        if b > 0:
            return f"{a}+{format_scalar(b)}*rt"
        return f"{a}-{format_scalar(-b)}*rt"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_point(pt):
    return "inf" if pt.is_inf else format_scalar(pt.p)


def _parse_rational(text, column):
    t = text.strip()
    try:
        if "/" in t:
            n, d = t.split("/")
            if not n.strip().lstrip("+-").isdigit() or not d.strip().isdigit():
                raise ValueError
            if int(d) == 0:
                raise ParseError(f"zero denominator in {text!r}", 1, column)
            return Fraction(int(n), int(d))
        if not t.lstrip("+-").isdigit():
            raise ValueError
        return Fraction(int(t))
    except ValueError:
        raise ParseError(f"malformed scalar {text!r}", 1, column) from None


def parse_scalar(text, sqrt=None, column=1):
    """Parse ``p``, ``p/q``, ``a+b*rt`` or ``a-b*rt`` (whitespace-insensitive)."""
    t = "".join(text.split())
    if not t:
        raise ParseError("empty scalar", 1, column)
    if "rt" not in t:
        return _parse_rational(t, column)
    if sqrt is None:
        raise ParseError(f"surd in {text!r} but no --sqrt base given", 1, column)
    if not t.endswith("*rt"):
        raise ParseError(f"malformed surd {text!r}", 1, column)
    body = t[:-3]
    # split at the last sign that is not leading and not after '/'
    cut = None
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-":
            cut = i
            break
    if cut is None:
        a, b = Fraction(0), _parse_rational(body, column)
    else:
        a = _parse_rational(body[:cut], column)
        b = _parse_rational(body[cut + 1:], column)
        if body[cut] == "-":
            b = -b
    return quad(a, b, sqrt)


def parse_point(text, sqrt=None, column=1):
    if text.strip() == "inf":
        return INF
    return ProjPoint(parse_scalar(text, sqrt, column), 1)
