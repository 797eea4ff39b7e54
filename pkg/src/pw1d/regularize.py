"""Regularization of finite piecewise groups into automorphism groups.

A finite group ``G`` of piecewise maps is cut along a ``G``-invariant
finite set ``B`` of points containing every singular point; ``G`` then
permutes the open arcs between consecutive points of ``B`` by genuine
affine (or homographic) maps.  The arcs become charts of a new 1-manifold
whose arc ends are glued along the ``G``-orbits of the original adjacencies.
With ``trim=True`` a largest family of orbits using each arc end at most
once is kept, preferring fewer components; ``trim=False`` keeps every orbit
and yields a possibly non-Hausdorff manifold.

Affine mode re-charts each arc orbit through a representative arc and glues
ends isometrically, so ``G`` acts by isometries of the glued manifold.
Projective mode keeps the source coordinates and glues through the germs of
the group elements at the cut points.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import moebius as mb
from . import piecewise as pw
from .errors import (MixedModel, NotACircle, NotAGroup, NotHausdorff,
                     TargetNotRepresentable, TooLarge, ValidationError)
from .moebius import IDENTITY, Homography
from .scalar import (ProjPoint, circular_order, floor, format_point, format_scalar,
                     interior_point)
from .textio import FORMAT_HEADER, format_map

__all__ = [
    "AFFINE",
    "PROJECTIVE",
    "Arc",
    "Gluing",
    "ChartedManifold",
    "OpenInterval",
    "StandardCircle",
    "NonstandardCircle",
    "ProjectiveCover",
    "Unclassified",
    "Holonomy",
    "enumerate_group",
    "cut_and_glue",
    "holonomy",
    "classify_component",
    "conjugator",
    "verify_regularized",
]

AFFINE = "affine"
PROJECTIVE = "projective"
LO, HI = "lo", "hi"


# -- classifications --------------------------------------------------------

@dataclass(frozen=True)
class OpenInterval:
    def __str__(self):
        return "OpenInterval"


@dataclass(frozen=True)
class StandardCircle:
    """R/Z; ``length`` is the holonomy translation after normalization."""

    length: object = Fraction(1)

    def __str__(self):
        return f"StandardCircle({format_scalar(self.length)})"


@dataclass(frozen=True)
class NonstandardCircle:
    t: object

    def __str__(self):
        return f"NonstandardCircle({format_scalar(self.t)})"


@dataclass(frozen=True)
class ProjectiveCover:
    n: int

    def __str__(self):
        return f"ProjectiveCover({self.n})"


@dataclass(frozen=True)
class Unclassified:
    reason: str

    def __str__(self):
        return f"Unclassified({self.reason})"


# -- charted manifolds ------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """A chart: the positive arc of P^1 from ``lo`` to ``hi``.

    ``lo == hi`` means the whole line minus that point.  ``source`` is the
    arc of the original circle and ``chart`` the map from source
    coordinates to chart coordinates, when the arc came from a group.
    """

    index: int
    lo: ProjPoint
    hi: ProjPoint
    source: tuple = None
    chart: Homography = IDENTITY

    def end(self, side):
        return self.lo if side == LO else self.hi


@dataclass(frozen=True)
class Gluing:
    """Glue ``end_a = (arc, side)`` to ``end_b``; ``transition`` sends chart
    coordinates of arc ``a`` near its end to those of arc ``b``."""

    end_a: tuple
    end_b: tuple
    transition: Homography


@dataclass
class ChartedManifold:
    mode: str
    arcs: list
    gluings: list
    conflicts: list = field(default_factory=list)
    model: str = None
    points: tuple = ()  # the cut set B, when built from a group
    action: dict = None  # (element index, arc) -> (image arc, chart map), likewise

    def __post_init__(self):
        for g in self.gluings:
            for arc, side in (g.end_a, g.end_b):
                e = self.arcs[arc].end(side)
                if mb.apply(g.transition, self.arcs[g.end_a[0]].end(g.end_a[1])) != \
                        self.arcs[g.end_b[0]].end(g.end_b[1]):
                    raise ValidationError(f"transition of {g} does not match the ends")
                if self.mode == AFFINE and (not mb.is_affine(g.transition) or e.is_inf):
                    raise ValidationError("affine manifolds need affine transitions "
                                          "and finite chart ends")

    def gluings_at(self, end):
        out = []
        for g in self.gluings:
            if g.end_a == end:
                out.append((g.end_b, g.transition))
            if g.end_b == end:
                out.append((g.end_a, mb.inverse(g.transition)))
        return out

    def components(self):
        parent = list(range(len(self.arcs)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for g in self.gluings:
            a, b = find(g.end_a[0]), find(g.end_b[0])
            if a != b:
                parent[max(a, b)] = min(a, b)
        comps = {}
        for i in range(len(self.arcs)):
            comps.setdefault(find(i), []).append(i)
        return sorted(comps.values())

    def is_hausdorff(self, comp):
        return all(len(self.gluings_at((i, s))) <= 1 for i in comp for s in (LO, HI))

    def is_circle(self, comp):
        return all(len(self.gluings_at((i, s))) == 1 for i in comp for s in (LO, HI))

    # -- output --
    def to_dict(self):
        def glue(g):
            return {"a": [g.end_a[0], g.end_a[1]], "b": [g.end_b[0], g.end_b[1]],
                    "transition": str(g.transition)}

        return {
            "format": FORMAT_HEADER,
            "mode": self.mode,
            "arcs": [{"index": a.index, "lo": format_point(a.lo), "hi": format_point(a.hi),
                      "source": None if a.source is None
                      else [format_point(p) for p in a.source],
                      "chart": str(a.chart)} for a in self.arcs],
            "gluings": [glue(g) for g in self.gluings],
            "dropped": [glue(g) for g in self.conflicts],
            "components": self.components(),
        }

    def to_text(self):
        lines = [FORMAT_HEADER, f"manifold mode {self.mode} arcs {len(self.arcs)} "
                                f"gluings {len(self.gluings)} components {len(self.components())}"]
        for a in self.arcs:
            src = "" if a.source is None else \
                f" source ({format_point(a.source[0])}, {format_point(a.source[1])})"
            lines.append(f"arc {a.index} chart ({format_point(a.lo)}, {format_point(a.hi)})"
                         f"{src} via {a.chart}")
        for g in self.gluings:
            lines.append(f"glue {g.end_a[0]}.{g.end_a[1]} {g.end_b[0]}.{g.end_b[1]} "
                         f"{g.transition}")
        for g in self.conflicts:
            lines.append(f"dropped {g.end_a[0]}.{g.end_a[1]} {g.end_b[0]}.{g.end_b[1]} "
                         f"{g.transition}")
        return "\n".join(lines) + "\n"

    def to_dot(self):
        lines = [f"// {FORMAT_HEADER}", "graph manifold {"]
        for a in self.arcs:
            lines.append(f'  a{a.index} [label="{a.index}: ({format_point(a.lo)}, '
                         f'{format_point(a.hi)})"];')
        for g in self.gluings:
            lines.append(f'  a{g.end_a[0]} -- a{g.end_b[0]} [label="{g.end_a[1]}-{g.end_b[1]} '
                         f'{g.transition}"];')
        for g in self.conflicts:
            lines.append(f'  a{g.end_a[0]} -- a{g.end_b[0]} [style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- groups -----------------------------------------------------------------

def enumerate_group(generators, bound):
    """All elements of the group generated, identity first, or ``TooLarge``."""
    generators = list(generators)
    if not generators:
        raise ValidationError("no generators")
    model = generators[0].model
    if any(g.model != model for g in generators):
        raise MixedModel("generators use different models")
    gens = []
    for g in generators:
        gens.extend([g, pw.inverse(g)])
    ident = pw.identity(model)
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = pw.compose(g, f)
                if h not in seen:
                    seen.add(h)
                    elements.append(h)
                    nxt.append(h)
                    if len(elements) > bound:
                        raise TooLarge(f"more than {bound} elements")
        frontier = nxt
    return elements


def _check_group(elements):
    s = set(elements)
    model = elements[0].model
    if any(f.model != model for f in elements):
        raise MixedModel("elements use different models")
    if pw.identity(model) not in s:
        raise NotAGroup("identity missing")
    for f in elements:
        if pw.inverse(f) not in s:
            raise NotAGroup(f"inverse of {f} missing")
        for g in elements:
            if pw.compose(f, g) not in s:
                raise NotAGroup(f"{f} o {g} missing")


# -- germs on the two models --------------------------------------------------

def _left_right(f, b):
    """Homographies acting just left and just right of ``b``.

    For the circ model these are expressions in the lifted coordinate of
    ``b`` taken in ``[0, 1)``; the left one uses the lift ``1`` when
    ``b == 0``.
    """
    i = f.piece_index(b)
    right = f.pieces[i][1]
    left = f.pieces[i - 1][1] if f.pieces[i][0] == b else right
    if f.model == pw.CIRC and b.p == 0:
        left = mb.compose(left, mb.affine(1, 1))  # evaluate the last piece at x + 1
    return left, right


def _value(f_model, h, b):
    y = mb.apply(h, b)
    if f_model == pw.CIRC:
        return ProjPoint(y.p - floor(y.p))
    return y


def _cut_set(elements):
    model = elements[0].model
    base = ProjPoint(Fraction(0)) if model == pw.CIRC else ProjPoint(Fraction(1), 0)
    todo = {base}
    for f in elements:
        todo.update(pw.singular_points(f))
    pts = set()
    while todo:
        b = todo.pop()
        if b in pts:
            continue
        pts.add(b)
        for f in elements:
            for h in _left_right(f, b):
                todo.add(_value(model, h, b))
        if len(pts) > 10000:
            raise TooLarge("cut set does not close up")
    return sorted(pts, key=lambda p: p.key)


class _ArcAction:
    """How each element moves the open arcs between consecutive cut points."""

    def __init__(self, elements, cuts):
        self.model = elements[0].model
        self.cuts = cuts
        n = len(cuts)
        if self.model == pw.CIRC:
            ends = [c.p for c in cuts] + [Fraction(1)]
            self.source = [(cuts[j], ProjPoint(ends[j + 1])) for j in range(n)]
            self.mids = [ProjPoint((ends[j] + ends[j + 1]) / 2) for j in range(n)]
        else:
            self.source = [(cuts[j], cuts[(j + 1) % n]) for j in range(n)]
            self.mids = [interior_point(a, b) for a, b in self.source]
        self.table = {}
        for fi, f in enumerate(elements):
            for j, m in enumerate(self.mids):
                h = f.pieces[f.piece_index(m)][1]
                y = mb.apply(h, m)
                if self.model == pw.CIRC:
                    shift = floor(y.p)
                    h = mb.compose(mb.affine(1, -shift), h)
                    y = ProjPoint(y.p - shift)
                    k = max(i for i, c in enumerate(cuts) if c.p <= y.p)
                else:
                    k = next(i for i, (a, b) in enumerate(self.source)
                             if _inside(y, a, b))
                self.table[(fi, j)] = (k, h)

    def image_end(self, fi, j, side):
        k, h = self.table[(fi, j)]
        if mb.orientation(h) < 0:
            side = LO if side == HI else HI
        return k, side


def _inside(y, a, b):
    if a == b:
        return y != a
    return y != a and y != b and circular_order(a, y, b)


# -- cut and glue -----------------------------------------------------------

def cut_and_glue(elements, mode=None, trim=True):
    """Glue the arcs cut out by a finite group into a charted 1-manifold."""
    elements = list(elements)
    if not elements:
        raise NotAGroup("empty element list")
    model = elements[0].model
    if any(f.model != model for f in elements):
        raise MixedModel("elements use different models")
    mode = mode or (AFFINE if model == pw.CIRC else PROJECTIVE)
    if mode == PROJECTIVE and model == pw.CIRC:
        elements = [pw.convert_model(f) for f in elements]
        model = pw.PROJ
    if mode == AFFINE and model == pw.PROJ:
        elements = [pw.convert_model(f) for f in elements]
        model = pw.CIRC
    _check_group(elements)
    ident = pw.identity(model)
    elements = [ident] + [f for f in elements if f != ident]
    cuts = _cut_set(elements)
    act = _ArcAction(elements, cuts)
    n = len(cuts)
    if mode == AFFINE:
        arcs, chart_side = _affine_charts(elements, act)
    else:
        arcs = [Arc(j, a, b, (a, b), IDENTITY) for j, (a, b) in enumerate(act.source)]
        chart_side = {(j, s): s for j in range(n) for s in (LO, HI)}

    orbits = []
    for j in range(n):
        left = (j - 1) % n
        orbit = {}
        for fi in range(len(elements)):
            ea = act.image_end(fi, left, HI)
            eb = act.image_end(fi, j, LO)
            if mode == AFFINE:
                g = _isometric_gluing(arcs, chart_side, ea, eb)
            else:
                hl = act.table[(fi, left)][1]
                hr = act.table[(fi, j)][1]
                g = Gluing(ea, eb, mb.compose(hr, mb.inverse(hl)))
            orbit[_oriented(g)] = None
        orbit = list(orbit)
        if not any(_same(orbit[0], h) for o in orbits for h in o):
            orbits.append(orbit)
    keep = range(len(orbits)) if not trim else _select(orbits, n)
    accepted = [g for i in keep for g in orbits[i]]
    dropped = [g for i in range(len(orbits)) if i not in keep for g in orbits[i]]
    glu = [Gluing((ea[0], chart_side[ea]), (eb[0], chart_side[eb]), g.transition)
           for g in accepted for ea, eb in [(g.end_a, g.end_b)]]
    con = [Gluing((ea[0], chart_side[ea]), (eb[0], chart_side[eb]), g.transition)
           for g in dropped for ea, eb in [(g.end_a, g.end_b)]]
    return ChartedManifold(mode, arcs, glu, con, model, tuple(cuts), dict(act.table))


def _ends(orbit):
    return [e for g in orbit for e in (g.end_a, g.end_b)]


def _select(orbits, n, limit=18):
    """Pick pairwise disjoint orbits: most gluings, then fewest components.

    Orbits gluing some end twice are never eligible.  Ties go to the earliest
    orbits; past ``limit`` candidates the choice falls back to a greedy pass.
    """
    cand = [i for i, o in enumerate(orbits) if len(set(_ends(o))) == len(_ends(o))]
    if len(cand) > limit:
        chosen, used = [], set()
        for i in cand:
            ends = set(_ends(orbits[i]))
            if not ends & used:
                chosen.append(i)
                used |= ends
        return chosen

    def components(chosen):
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i
        for i in chosen:
            for g in orbits[i]:
                parent[find(g.end_a[0])] = find(g.end_b[0])
        return len({find(i) for i in range(n)})

    best = [None, None]
    sizes = [len(orbits[i]) for i in cand]

    def search(k, chosen, used, glued):
        if best[0] is not None and glued + sum(sizes[k:]) < best[0][0]:
            return
        if k == len(cand):
            score = (glued, -components(chosen))
            if best[0] is None or score > best[0]:
                best[0], best[1] = score, list(chosen)
            return
        ends = set(_ends(orbits[cand[k]]))
        if not ends & used:
            chosen.append(cand[k])
            search(k + 1, chosen, used | ends, glued + sizes[k])
            chosen.pop()
        search(k + 1, chosen, used, glued)

    search(0, [], frozenset(), 0)
    return best[1]


def _same(g, h):
    return g.end_a == h.end_a and g.end_b == h.end_b and g.transition == h.transition


def _oriented(g):
    if (g.end_a[0], g.end_a[1]) <= (g.end_b[0], g.end_b[1]):
        return g
    return Gluing(g.end_b, g.end_a, mb.inverse(g.transition))


def _affine_charts(elements, act):
    n = len(act.cuts)
    arcs, side = [None] * n, {}
    for r in range(n):
        if arcs[r] is not None:
            continue
        lo, hi = act.source[r]
        for fi in range(len(elements)):
            k, h = act.table[(fi, r)]
            if arcs[k] is None:
                psi = mb.inverse(h)  # arc k -> arc r coordinates
                arcs[k] = Arc(k, lo, hi, act.source[k], psi)
                flip = mb.orientation(psi) < 0
                side[(k, LO)] = HI if flip else LO
                side[(k, HI)] = LO if flip else HI
    return arcs, side


def _isometric_gluing(arcs, chart_side, ea, eb):
    """Slope +-1 transition between circle-ends ``ea``, ``eb`` (chart terms)."""
    ca, cb = chart_side[ea], chart_side[eb]
    va = arcs[ea[0]].end(ca).p
    vb = arcs[eb[0]].end(cb).p
    s = 1 if ca != cb else -1
    return Gluing(ea, eb, mb.affine(s, vb - s * va))


# -- holonomy and classification ----------------------------------------------

@dataclass(frozen=True)
class Holonomy:
    map: Homography
    degree: int
    chain: tuple  # (arc, direction) visited, direction +1 for lo -> hi


_REFERENCE = [ProjPoint(Fraction(p, q)) for q in (7, 11, 13) for p in range(-30, 31)]


def holonomy(manifold, component, base=None, reverse=False):
    """Composite of the transitions around a circle component.

    ``component`` is an index into ``manifold.components()`` or a list of arc
    indices.  The result is well defined up to conjugation (choice of
    ``base``) and inversion (``reverse``).
    """
    comp = manifold.components()[component] if isinstance(component, int) else component
    if not manifold.is_circle(comp):
        raise NotACircle("component is not a closed chain of arcs")
    base = comp[0] if base is None else base
    side_out = LO if reverse else HI
    arc, dev = base, IDENTITY
    chain, devs = [], []
    for _ in range(2 * len(manifold.arcs) + 2):
        direction = 1 if side_out == HI else -1
        chain.append((arc, direction))
        devs.append(dev)
        (other, t), = manifold.gluings_at((arc, side_out))
        dev = mb.compose(dev, mb.inverse(t))
        arc, side_in = other
        side_out = HI if side_in == LO else LO
        if arc == base:
            if side_out != (LO if reverse else HI):
                raise ValidationError("chain closes up with reversed orientation")
            break
    else:
        raise ValidationError("chain does not close up")
    return Holonomy(dev, _degree(manifold, chain, devs), tuple(chain))


def _degree(manifold, chain, devs):
    used = set()
    for (a, _), d in zip(chain, devs):
        arc = manifold.arcs[a]
        used.update({mb.apply(d, arc.lo), mb.apply(d, arc.hi)})
    ref = next(p for p in _REFERENCE if p not in used)
    total = 0
    for (a, direction), d in zip(chain, devs):
        arc = manifold.arcs[a]
        pre = mb.apply(mb.inverse(d), ref)
        if _inside(pre, arc.lo, arc.hi):
            total += direction * mb.orientation(d)
    return total


def classify_component(manifold, component, mode=None, base=None, reverse=False):
    """Kuiper-style label of a Hausdorff component.

    ``base`` and ``reverse`` choose where and in which direction the
    holonomy is computed; the label does not depend on them.
    """
    mode = mode or manifold.mode
    comp = manifold.components()[component] if isinstance(component, int) else component
    if not manifold.is_hausdorff(comp):
        raise NotHausdorff("an arc end is glued to two different germs")
    if not manifold.is_circle(comp):
        return OpenInterval()
    hol = holonomy(manifold, comp, base=base, reverse=reverse)
    h = hol.map
    if h == IDENTITY:
        if mode == PROJECTIVE:
            return ProjectiveCover(abs(hol.degree))
        return Unclassified("trivial affine holonomy")
    if mode == AFFINE:
        if not mb.is_affine(h):
            return Unclassified(f"non-affine holonomy {h}")
        slope = pw._pq(h)[0]
        if slope == 1:
            # translations by b and 1 are conjugate; normalize to R/Z
            return StandardCircle(Fraction(1))
        if slope > 0:
            return NonstandardCircle(max(slope, 1 / slope))
        return Unclassified(f"orientation-reversing holonomy {h}")
    tr2 = (h.a + h.d) ** 2 / h.det
    kind = "elliptic" if tr2 < 4 else "parabolic" if tr2 == 4 else "hyperbolic"
    return Unclassified(f"{kind} projective holonomy {h}")


# -- conjugators --------------------------------------------------------------

def conjugator(elements, manifold=None):
    """Piecewise map ``k`` with ``k g k^-1`` global for every ``g``."""
    elements = list(elements)
    if manifold is None:
        manifold = cut_and_glue(elements)
    comps = manifold.components()
    labels = [classify_component(manifold, i) for i in range(len(comps))]
    ok = len(comps) == 1 and (
        (manifold.mode == AFFINE and isinstance(labels[0], StandardCircle))
        or (manifold.mode == PROJECTIVE and labels[0] == ProjectiveCover(1)))
    if not ok:
        raise TargetNotRepresentable(
            "target is not R/Z or P^1: " + ", ".join(map(str, labels)), labels)
    hol = holonomy(manifold, 0, base=0)
    devs = {}
    dev = IDENTITY
    for a, direction in hol.chain:
        devs[a] = dev
        (other, t), = manifold.gluings_at((a, HI if direction > 0 else LO))
        dev = mb.compose(dev, mb.inverse(t))
    if manifold.mode == AFFINE:
        length = pw._pq(hol.map)[1]
        flip = mb.affine(-1, 0) if length < 0 else IDENTITY
        scale = mb.affine(1 / abs(length), 0)
        pieces = []
        for a in manifold.arcs:
            k = mb.compose(scale, mb.compose(flip, mb.compose(devs[a.index], a.chart)))
            pieces.append((a.source[0].p, a.source[1].p, *pw._pq(k)))
        pieces.sort()
        lifted = pw._circ_finish(pieces)
        return pw.make(pw.CIRC, lifted.pieces)
    pieces = [(a.source[0], mb.compose(devs[a.index], a.chart)) for a in manifold.arcs]
    pieces.sort(key=lambda p: p[0].key)
    return pw.make(pw.PROJ, pieces)


def verify_regularized(elements, k):
    kinv = pw.inverse(k)
    return all(pw.is_global(pw.compose(k, pw.compose(g, kinv)))
               for g in elements if g.model == k.model)
