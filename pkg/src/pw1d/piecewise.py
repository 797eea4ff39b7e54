"""Piecewise homographic and piecewise affine transformations of the circle.

Two models of the circle are supported:

``proj``
    The projective line ``R u {inf}``.  Each piece is a homography acting on
    a half-open arc ``[left_i, left_{i+1})`` taken cyclically.
``circ``
    ``R/Z`` with fundamental domain ``[0, 1)``.  Each piece is an affine map
    of ``R`` acting on ``[left_i, left_{i+1})`` (the last piece ends at 1);
    values are read modulo 1.

Elements are only defined modulo finite sets, so every map is stored in a
canonical form that makes equality syntactic.  In the ``circ`` model the
canonical form cuts both the source and the target at 0: the first left
endpoint is always 0, every piece's image lies in ``[0, 1]``, and adjacent
pieces with equal affine expressions are merged.  In the ``proj`` model
cyclically adjacent pieces with equal homographies are merged and the
endpoints are listed from the smallest (``inf`` counts as largest).
"""

from bisect import bisect_right
from fractions import Fraction
from typing import NamedTuple

from . import moebius as mb
from .errors import (ModelMismatch, NonAffinePieceInCircModel,
                     NotCircularlyOrdered, NotInjective, NotSupportedOnComplement,
                     NotSurjective)
from .moebius import IDENTITY, Homography
from .scalar import (ProjPoint, as_scalar, circular_order, floor, format_scalar,
                     interior_point, point, sign)

__all__ = [
    "PROJ",
    "CIRC",
    "PiecewiseMap",
    "Evaluation",
    "make",
    "identity",
    "rotation",
    "canonicalize",
    "compose",
    "inverse",
    "equals_mod_finite",
    "apply_at",
    "breakpoints",
    "singular_points",
    "is_global",
    "is_continuous",
    "is_C1",
    "is_piecewise_affine",
    "is_IET",
    "order_of",
    "Unknown",
    "convert_model",
    "power",
]

PROJ = "proj"
CIRC = "circ"
_ZERO = ProjPoint(Fraction(0))


class Evaluation(NamedTuple):
    value: ProjPoint
    at_breakpoint: bool


class Unknown(NamedTuple):
    bound: int


class PiecewiseMap:
    """A validated, canonical piecewise map.  Build with :func:`make`."""

    __slots__ = ("model", "pieces", "_keys", "_hash")

    def __init__(self, model, pieces):
        # trusted constructor: `pieces` must already be canonical
        self.model = model
        self.pieces = tuple(pieces)
        if model == CIRC:
            self._keys = [l.p for l, _ in self.pieces]
        else:
            self._keys = [l.key for l, _ in self.pieces]
        self._hash = None

    @property
    def endpoints(self):
        return [l for l, _ in self.pieces]

    @property
    def maps(self):
        return [h for _, h in self.pieces]

    def __len__(self):
        return len(self.pieces)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseMap):
            return NotImplemented
        return self.model == other.model and self.pieces == other.pieces

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.model, self.pieces))
        return self._hash

    def __call__(self, x):
        return apply_at(self, x).value

    def __matmul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"PiecewiseMap({self})"

    def __str__(self):
        from .textio import format_map
        return format_map(self)

    # -- piece lookup ------------------------------------------------------
    def piece_index(self, x):
        """Index of the piece whose (left-closed) arc contains ``x``."""
        if self.model == CIRC:
            return bisect_right(self._keys, x.p) - 1
        i = bisect_right(self._keys, x.key) - 1
        return i % len(self.pieces)

    def arc(self, i):
        n = len(self.pieces)
        return self.pieces[i][0], self.pieces[(i + 1) % n][0]


def _pq(h):
    """Slope and intercept of an affine homography."""
    d = as_scalar(h.d)
    return h.a / d, h.b / d


def _reduce(pt):
    v = pt.p
    return ProjPoint(v - floor(v)) if not 0 <= v < 1 else pt


def _as_circ_point(x):
    x = point(x)
    if x.is_inf:
        raise ValueError("inf is not a point of R/Z")
    return _reduce(x)


# -- circ canonical pipeline ----------------------------------------------

def _circ_finish(lifted):
    """Canonical circ map from contiguous lifted pieces ``(lo, hi, p, q)``."""
    out = []
    for lo, hi, p, q in lifted:
        v1, v2 = p * lo + q, p * hi + q
        m1, m2 = (v1, v2) if v1 < v2 else (v2, v1)
        cuts = []
        j = floor(m1) + 1
        while j < m2:
            cuts.append((j - q) / p)
            j += 1
        cuts.sort()
        edges = [lo, *cuts, hi]
        for a, b in zip(edges, edges[1:]):
            u1, u2 = p * a + q, p * b + q
            n = floor(u1 if u1 < u2 else u2)
            qq = q - n
            if out and out[-1][2] == p and out[-1][3] == qq:
                out[-1] = (out[-1][0], b, p, qq)
            else:
                out.append((a, b, p, qq))
    return PiecewiseMap(CIRC, [(ProjPoint(lo), mb.affine(p, q)) for lo, _, p, q in out])


def _circ_lifted(f):
    n = len(f.pieces)
    res = []
    for i, (l, h) in enumerate(f.pieces):
        hi = f.pieces[i + 1][0].p if i + 1 < n else Fraction(1)
        res.append((l.p, hi, *_pq(h)))
    return res


def _circ_image_intervals(lifted):
    out = []
    for lo, hi, p, q in lifted:
        v1, v2 = p * lo + q, p * hi + q
        out.append((v1, v2) if v1 < v2 else (v2, v1))
    return out


def _make_circ(pieces):
    for l, h in pieces:
        if not mb.is_affine(h):
            raise NonAffinePieceInCircModel(f"piece {h} at {l} is not affine")
        if l.is_inf or not 0 <= l.p < 1:
            raise NotCircularlyOrdered(f"circ endpoint {l} outside [0,1)")
    pieces = _rotate_to_min(pieces, lambda pt: pt.p)
    lifted = []
    n = len(pieces)
    for i, (l, h) in enumerate(pieces):
        hi = pieces[i + 1][0].p if i + 1 < n else Fraction(1)
        lifted.append((l.p, hi, *_pq(h)))
    if lifted[0][0] != 0:
        # the last piece wraps through 0: use its expression on x + 1
        _, _, p, q = lifted[-1]
        lifted.insert(0, (Fraction(0), lifted[0][0], p, p + q))
    f = _circ_finish(lifted)
    _check_tiling(_circ_image_intervals(_circ_lifted(f)))
    return f


def _check_tiling(intervals):
    intervals = sorted(intervals)
    expected = 0
    for lo, hi in intervals:
        if lo < expected:
            raise NotInjective(f"image arcs overlap near {format_scalar(lo)}")
        if lo > expected:
            raise NotSurjective(f"image misses ({format_scalar(expected)}, {format_scalar(lo)})")
        expected = hi
    if expected != 1:
        raise NotSurjective(f"image misses ({format_scalar(expected)}, 1)")


# -- proj canonical pipeline ----------------------------------------------

def _rotate_to_min(pieces, key):
    keys = [key(l) for l, _ in pieces]
    n = len(keys)
    if len(set(keys)) != n:
        raise NotCircularlyOrdered("repeated endpoint")
    start = min(range(n), key=keys.__getitem__)
    rot = pieces[start:] + pieces[:start]
    rk = keys[start:] + keys[:start]
    if any(not a < b for a, b in zip(rk, rk[1:])):
        raise NotCircularlyOrdered("endpoints are not circularly ordered")
    return rot


def _proj_finish(pieces):
    """Merge cyclically adjacent equal maps; ``pieces`` sorted by endpoint."""
    out = []
    for l, h in pieces:
        if out and out[-1][1] == h:
            continue
        out.append((l, h))
    if len(out) > 1 and out[0][1] == out[-1][1]:
        out.pop(0)
    if len(out) == 1:
        out = [(_ZERO, out[0][1])]
    return PiecewiseMap(PROJ, out)


def _proj_image_arcs(f):
    arcs = []
    for i, (l, h) in enumerate(f.pieces):
        r = f.arc(i)[1]
        a, b = mb.apply(h, l), mb.apply(h, r)
        arcs.append((a, b) if mb.orientation(h) > 0 else (b, a))
    return arcs


def _make_proj(pieces):
    pieces = _rotate_to_min(pieces, lambda pt: pt.key)
    f = _proj_finish(pieces)
    if len(f.pieces) == 1:
        return f
    arcs = sorted(_proj_image_arcs(f), key=lambda ab: ab[0].key)
    n = len(arcs)
    for i, (s, e) in enumerate(arcs):
        s_next = arcs[(i + 1) % n][0]
        if s_next == s or (s_next != e and circular_order(s, s_next, e)):
            raise NotInjective(f"image arcs overlap near {s_next}")
        if s_next != e:
            raise NotSurjective(f"image misses the arc ({e}, {s_next})")
    return f


def make(model, pieces):
    """Validate a piece list and return the canonical :class:`PiecewiseMap`.

    ``pieces`` is a sequence of ``(left_endpoint, Homography)``; endpoints
    may be ProjPoints, scalars or ``"inf"``.
    """
    pieces = [(point(l), h) for l, h in pieces]
    if not pieces:
        raise NotCircularlyOrdered("empty piece list")
    if model == CIRC:
        return _make_circ(pieces)
    if model == PROJ:
        return _make_proj(pieces)
    raise ValueError(f"unknown model {model!r}")


def identity(model=CIRC):
    return PiecewiseMap(model, [(_ZERO, IDENTITY)])


def rotation(t):
    """Rotation ``x -> x + t`` of R/Z."""
    t = Fraction(t) if not hasattr(t, "k") else t
    return _circ_finish([(Fraction(0), Fraction(1), Fraction(1), t)])


def canonicalize(f):
    """Canonical form of ``f`` (already canonical when built by :func:`make`)."""
    return make(f.model, f.pieces)


# -- group operations ------------------------------------------------------

def _in_closed_arc(z, a, b):
    if z == a or z == b or a == b:
        return True
    return circular_order(a, z, b)


def _compose_proj(f, g):
    if len(f.pieces) == 1 and len(g.pieces) == 1:
        return PiecewiseMap(PROJ, [(_ZERO, mb.compose(f.pieces[0][1], g.pieces[0][1]))])
    cuts = set(g.endpoints) if len(g.pieces) > 1 else set()
    if len(f.pieces) > 1:
        ys = f.endpoints
        for i, (l, h) in enumerate(g.pieces):
            hinv = mb.inverse(h)
            a, b = g.arc(i)
            for y in ys:
                z = mb.apply(hinv, y)
                if len(g.pieces) == 1 or _in_closed_arc(z, a, b):
                    cuts.add(z)
    pts = sorted(cuts, key=lambda pt: pt.key)
    out = []
    n = len(pts)
    for j, b in enumerate(pts):
        m = interior_point(b, pts[(j + 1) % n])
        gi = g.pieces[g.piece_index(m)][1]
        fk = f.pieces[f.piece_index(mb.apply(gi, m))][1]
        out.append((b, mb.compose(fk, gi)))
    return _proj_finish(out)


def _compose_circ(f, g):
    glift = _circ_lifted(g)
    cuts = {lo for lo, _, _, _ in glift}
    ys = f._keys
    for lo, hi, p, q in glift:
        for y in ys:
            for t in (y, y + 1):
                x = (t - q) / p
                if lo < x < hi:
                    cuts.add(x)
    pts = sorted(cuts)
    pts.append(Fraction(1))
    out = []
    gk = g._keys
    for a, b in zip(pts, pts[1:]):
        m = (a + b) / 2
        _, _, p, q = glift[bisect_right(gk, m) - 1]
        y = p * m + q
        n = floor(y)
        h = f.pieces[bisect_right(ys, y - n) - 1][1]
        p2, q2 = _pq(h)
        out.append((a, b, p2 * p, p2 * (q - n) + q2))
    return _circ_finish(out)


def compose(f, g):
    """``f o g``: apply ``g`` first."""
    if f.model != g.model:
        raise ModelMismatch(f"cannot compose {f.model} with {g.model}")
    if f.model == CIRC:
        return _compose_circ(f, g)
    return _compose_proj(f, g)


def inverse(f):
    if f.model == CIRC:
        lifted = _circ_lifted(f)
        inv = []
        for (lo, hi, p, q), (m1, m2) in zip(lifted, _circ_image_intervals(lifted)):
            inv.append((m1, m2, 1 / p, -q / p))
        inv.sort()
        return _circ_finish(inv)
    if len(f.pieces) == 1:
        return PiecewiseMap(PROJ, [(_ZERO, mb.inverse(f.pieces[0][1]))])
    inv = [(s, mb.inverse(h)) for (s, _), (_, h) in zip(_proj_image_arcs(f), f.pieces)]
    inv.sort(key=lambda ph: ph[0].key)
    return _proj_finish(inv)


def power(f, n):
    result = identity(f.model)
    base = f if n >= 0 else inverse(f)
    for _ in range(abs(n)):
        result = compose(base, result)
    return result


def equals_mod_finite(f, g):
    if f.model != g.model:
        raise ModelMismatch(f"cannot compare {f.model} with {g.model}")
    return f == g


# -- evaluation ------------------------------------------------------------

def apply_at(f, x):
    """Value of the right-continuous representative at ``x``.

    ``at_breakpoint`` is set when the value depends on the representative.
    """
    if f.model == CIRC:
        x = _as_circ_point(x)
        i = f.piece_index(x)
        h = f.pieces[i][1]
        at_bp = len(f.pieces) > 1 and f.pieces[i][0] == x
        return Evaluation(_reduce(mb.apply(h, x)), at_bp)
    x = point(x)
    i = f.piece_index(x)
    at_bp = len(f.pieces) > 1 and f.pieces[i][0] == x
    return Evaluation(mb.apply(f.pieces[i][1], x), at_bp)


def breakpoints(f):
    """Endpoints of the canonical form; empty for a one-piece map."""
    return f.endpoints if len(f.pieces) > 1 else []


def _circ_germs(f, i):
    """(left expression, right expression) at endpoint ``i`` in local lifts.

    Both are affine maps of R written in the coordinate ``u`` with ``u = 0``
    at the breakpoint.
    """
    l = f.pieces[i][0].p
    left = f.pieces[i - 1][1]  # i == 0 wraps to the last piece, lift x -> x + 1
    shift = 1 if i == 0 else l
    lp, lq = _pq(left)
    rp, rq = _pq(f.pieces[i][1])
    return (lp, lp * shift + lq), (rp, rp * l + rq)


def singular_points(f):
    """Points where the left and right germs of ``f`` differ as circle maps."""
    if f.model == PROJ:
        return breakpoints(f)
    out = []
    for i, (l, _) in enumerate(f.pieces):
        (lp, lv), (rp, rv) = _circ_germs(f, i)
        if lp != rp or floor(lv - rv) != lv - rv:
            out.append(l)
    return out


# -- predicates ------------------------------------------------------------

def is_global(f):
    """Whether ``f`` agrees mod finite sets with a single automorphism."""
    if f.model == PROJ:
        return len(f.pieces) == 1
    _, h0 = f.pieces[0]
    if _pq(h0)[0] not in (1, -1):
        return False
    return not singular_points(f)


def is_continuous(f):
    if f.model == CIRC:
        for i in range(len(f.pieces)):
            (_, lv), (_, rv) = _circ_germs(f, i)
            d = lv - rv
            if floor(d) != d:
                return False
        return True
    if len(f.pieces) == 1:
        return True
    for i, (l, h) in enumerate(f.pieces):
        if mb.apply(f.pieces[i - 1][1], l) != mb.apply(h, l):
            return False
    return True


def is_C1(f):
    if not is_continuous(f):
        return False
    if f.model == CIRC:
        return all(_circ_germs(f, i)[0][0] == _circ_germs(f, i)[1][0]
                   for i in range(len(f.pieces)))
    if len(f.pieces) == 1:
        return True
    for i, (l, h) in enumerate(f.pieces):
        if mb.chart_derivative(f.pieces[i - 1][1], l) != mb.chart_derivative(h, l):
            return False
    return True


def is_piecewise_affine(f):
    """Circ maps always are; proj maps iff they come from the circ model."""
    if f.model == CIRC:
        return True
    try:
        convert_model(f)
    except (NotSupportedOnComplement, NonAffinePieceInCircModel):
        return False
    return True


def is_IET(f):
    return f.model == CIRC and all(h.a == h.d for h in f.maps)


def order_of(f, bound):
    """Least ``n <= bound`` with ``f^n`` the identity, else ``Unknown(bound)``."""
    ident = identity(f.model)
    g = f
    for n in range(1, bound + 1):
        if g == ident:
            return n
        g = compose(f, g)
    return Unknown(bound)


# -- change of model -------------------------------------------------------

_ONE = ProjPoint(Fraction(1))


def convert_model(f):
    """Circ -> proj by extending by the identity off [0,1), and back."""
    if f.model == CIRC:
        pieces = list(f.pieces) + [(_ONE, IDENTITY)]
        return _proj_finish(pieces)
    cuts = set(f.endpoints) if len(f.pieces) > 1 else set()
    cuts |= {_ZERO, _ONE}
    pts = sorted(cuts, key=lambda pt: pt.key)
    n = len(pts)
    arcs = []
    for j, a in enumerate(pts):
        b = pts[(j + 1) % n]
        m = interior_point(a, b)
        h = f.pieces[f.piece_index(m)][1]
        inside = not m.is_inf and 0 < m.p < 1
        if not inside and h != IDENTITY:
            raise NotSupportedOnComplement(f"{h} moves points of the arc ({a}, {b})")
        if inside:
            arcs.append((a, b, h))
    lifted = []
    for a, b, h in arcs:
        if not mb.is_affine(h):
            raise NonAffinePieceInCircModel(f"piece {h} on ({a}, {b}) is not affine")
        lifted.append((a.p, b.p, *_pq(h)))
    return _circ_finish(lifted)
