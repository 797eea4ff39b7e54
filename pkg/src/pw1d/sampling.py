"""Seeded random generators of valid piecewise maps, for property testing.

Every generator takes a :class:`random.Random` instance so runs are
reproducible from an explicit seed.  Results are rejected and redrawn until
they have at most ``max_pieces`` canonical pieces and every endpoint has
denominator at most ``max_den``.
"""

import random
from fractions import Fraction

from . import moebius as mb
from . import piecewise as pw
from .moebius import Homography
from .scalar import INF, ProjPoint

__all__ = ["random_circ", "random_proj", "random_map", "random_points", "bump"]

_DENS = (1, 2, 3, 4, 6, 8, 12, 24)


def _ok(f, max_pieces, max_den):
    if len(f.pieces) > max_pieces:
        return False
    return all(l.is_inf or l.p.denominator <= max_den for l, _ in f.pieces)


def _partition(rng, n, den):
    cuts = sorted(rng.sample(range(1, den), n - 1))
    return [Fraction(0)] + [Fraction(c, den) for c in cuts] + [Fraction(1)]


def random_circ(rng, max_pieces=6, max_den=24, iet=None):
    """A random piecewise affine bijection of R/Z.

    Each source interval is sent affinely, possibly reversing orientation,
    onto an interval of a second random partition under a random
    permutation.  With ``iet=True`` the two partitions have matching lengths
    and all pieces are translations.
    """
    if iet is None:
        iet = rng.random() < 0.3
    while True:
        den = rng.choice([d for d in _DENS if d <= max_den and d > 1])
        n = rng.randint(1, min(max_pieces, den - 1) if den > 2 else 2)
        src = _partition(rng, n, den)
        perm = list(range(n))
        rng.shuffle(perm)
        if iet:
            lengths = [src[perm[i] + 1] - src[perm[i]] for i in range(n)]
            tgt = [Fraction(0)]
            for length in lengths:
                tgt.append(tgt[-1] + length)
            slots = {perm[i]: i for i in range(n)}
        else:
            tgt = _partition(rng, n, rng.choice([d for d in _DENS if d <= max_den and d >= n]))
            slots = {i: perm[i] for i in range(n)}
        pieces = []
        for i in range(n):
            j = slots[i]
            a, b = src[i], src[i + 1]
            c, d = tgt[j], tgt[j + 1]
            flip = not iet and rng.random() < 0.3
            if flip:
                c, d = d, c
            p = (d - c) / (b - a)
            pieces.append((ProjPoint(a), mb.affine(p, c - p * a)))
        f = pw.make(pw.CIRC, pieces)
        if _ok(f, max_pieces, max_den):
            return f


def _global_homography(rng, bound):
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if a * d - b * c != 0:
            return Homography(a, b, c, d)


def _small_point(rng, max_den):
    if rng.random() < 0.15:
        return INF
    den = rng.choice([d for d in (1, 2, 3, 4) if d <= max_den])
    return ProjPoint(Fraction(rng.randint(-3 * den, 3 * den), den))


def bump(p, q, lam):
    """Identity on ``[p, q)`` and the hyperbolic map fixing ``p``, ``q`` with
    multiplier ``lam`` on ``[q, p)``."""
    a = Homography(p.p, q.p, p.q, q.q)
    u = mb.compose(a, mb.compose(mb.affine(lam, 0), mb.inverse(a)))
    return pw.make(pw.PROJ, [(p, mb.IDENTITY), (q, u)])


def random_proj(rng, max_pieces=6, max_den=24, entry_bound=5):
    """A random piecewise projective bijection of P^1.

    Products of up to three factors: global homographies with entries in
    ``[-entry_bound, entry_bound]``, hyperbolic bumps between small rational
    points, and random circle maps transported onto ``[0, 1)``.
    """
    while True:
        f = pw.identity(pw.PROJ)
        for _ in range(rng.randint(1, 3)):
            kind = rng.random()
            if kind < 0.4:
                g = pw.make(pw.PROJ, [(ProjPoint(Fraction(0)),
                                       _global_homography(rng, entry_bound))])
            elif kind < 0.75:
                p = _small_point(rng, max_den)
                q = _small_point(rng, max_den)
                if p == q:
                    continue
                g = bump(p, q, Fraction(rng.choice((2, 3))) ** rng.choice((1, -1)))
            else:
                g = pw.convert_model(random_circ(rng, 3, 4))
            f = pw.compose(g, f)
        if _ok(f, max_pieces, max_den):
            return f


def random_map(rng, model=None, **kw):
    model = model or rng.choice((pw.CIRC, pw.PROJ))
    return random_circ(rng, **kw) if model == pw.CIRC else random_proj(rng, **kw)


def random_points(rng, f_list, count, max_den=97):
    """``count`` random points avoiding every breakpoint of the given maps."""
    avoid = {b for f in f_list for b in pw.breakpoints(f)}
    circ = f_list[0].model == pw.CIRC
    out = []
    while len(out) < count:
        den = rng.randint(1, max_den)
        if circ:
            x = ProjPoint(Fraction(rng.randrange(den), den))
        else:
            x = ProjPoint(Fraction(rng.randint(-5 * den, 5 * den), den))
        if x not in avoid:
            out.append(x)
    return out


def rng_from(seed):
    return random.Random(seed)
