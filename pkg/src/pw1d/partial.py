"""Cofinite partial actions of free groups and their universal globalization.

Words in the free group are tuples of nonzero ints: letter ``i > 0`` is the
``i``-th generator (1-based) and ``-i`` its inverse.  A word acts by
composing the partial maps of its letters from the right.

The universal globalization is the quotient of (group) x (carrier) by
``(g, x) ~ (h, y)`` iff the partial action of ``h^-1 g`` is defined at
``x`` with value ``y``.  Every class has a unique representative ``(w, x)``
where ``w`` is reduced and its last letter is undefined at ``x`` (or ``w``
is empty); :func:`globalize_ball` explores classes by breadth-first search
on these normal forms.
"""

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import piecewise as pw
from .errors import (AxiomViolation, BallTooSmall, NotClosed,
                     RadiusZeroWithEmptySeeds, UnknownGenerator, ValidationError)
from .scalar import ProjPoint, format_point, parse_point
from .textio import FORMAT_HEADER, parse_map

__all__ = [
    "PartialActionSpec",
    "GlobClass",
    "GlobalizationBall",
    "reduce_word",
    "word_inverse",
    "parse_word",
    "format_word",
    "all_words",
    "partial_apply",
    "globalize_ball",
    "commensurated_check",
    "neumann_trim",
    "ends_estimate",
    "verify_axioms",
    "load_spec",
]


# -- words ------------------------------------------------------------------

def reduce_word(word):
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def word_inverse(word):
    return tuple(-l for l in reversed(word))


def _letter_key(letter):
    return 2 * (abs(letter) - 1) + (letter < 0)


def word_key(word):
    return (len(word), tuple(_letter_key(l) for l in word))


def all_words(ngens, length):
    """All reduced words of length <= ``length`` in shortlex order."""
    letters = sorted((s for i in range(1, ngens + 1) for s in (i, -i)), key=_letter_key)
    words = [()]
    frontier = [()]
    for _ in range(length):
        nxt = []
        for w in frontier:
            for s in letters:
                if w and w[-1] == -s:
                    continue
                nxt.append(w + (s,))
        words.extend(nxt)
        frontier = nxt
    return words


def format_word(word, names):
    if not word:
        return "e"
    return " ".join(names[abs(l) - 1] + ("^-1" if l < 0 else "") for l in word)


def parse_word(text, names):
    text = text.strip()
    if text in ("", "e"):
        return ()
    out = []
    for tok in text.split():
        inv = tok.endswith("^-1")
        name = tok[:-3] if inv else tok
        if name not in names:
            raise UnknownGenerator(f"unknown generator {name!r}")
        i = names.index(name) + 1
        out.append(-i if inv else i)
    return tuple(out)


# -- specs ------------------------------------------------------------------

@dataclass
class PartialActionSpec:
    """Generators with partial bijections on a finite set or on the circle.

    For a finite carrier pass ``points`` and ``tables`` (one dict per
    generator).  For the piecewise-induced carrier pass ``maps``; generator
    ``s`` is then defined exactly where ``s`` is locally a single affine or
    homographic map.
    """

    generators: list
    points: list = None
    tables: list = None
    maps: list = None
    relations: list = field(default_factory=list)
    seeds: list = None

    def __post_init__(self):
        if (self.maps is None) == (self.points is None):
            raise ValidationError("give either a finite carrier or piecewise maps")
        n = len(self.generators)
        if self.is_finite:
            if len(self.tables) != n:
                raise ValidationError("one table per generator required")
            where = set(self.points)
            self._inv = []
            for name, t in zip(self.generators, self.tables):
                if not set(t) <= where or not set(t.values()) <= where:
                    raise ValidationError(f"table of {name} leaves the carrier")
                if len(set(t.values())) != len(t):
                    raise ValidationError(f"table of {name} is not injective")
                self._inv.append({v: k for k, v in t.items()})
            self._order = {p: i for i, p in enumerate(self.points)}
            if self.seeds is None:
                self.seeds = list(self.points)
        else:
            if len(self.maps) != n:
                raise ValidationError("one map per generator required")
            self._sing = [frozenset(pw.singular_points(f)) for f in self.maps]
            self._invmaps = [pw.inverse(f) for f in self.maps]
            self._invsing = [frozenset(pw.singular_points(f)) for f in self._invmaps]
            if self.seeds is None:
                pts = set()
                for f in self.maps:
                    pts.update(pw.breakpoints(f))
                self.seeds = sorted(pts, key=lambda p: p.key)
            self.seeds = [
                pw._as_circ_point(s) if self.model == pw.CIRC else s for s in self.seeds
            ]

    @property
    def is_finite(self):
        return self.points is not None

    @property
    def model(self):
        return None if self.is_finite else self.maps[0].model

    def point_key(self, x):
        if self.is_finite:
            return self._order[x]
        return x.key

    def format_point(self, x):
        return format_point(x) if isinstance(x, ProjPoint) else str(x)

    def step(self, letter, x):
        """One letter applied to ``x``; ``None`` where undefined."""
        i = abs(letter) - 1
        if i >= len(self.generators) or letter == 0:
            raise UnknownGenerator(f"letter {letter} out of range")
        if self.is_finite:
            table = self.tables[i] if letter > 0 else self._inv[i]
            return table.get(x)
        if letter > 0:
            return None if x in self._sing[i] else self.maps[i](x)
        return None if x in self._invsing[i] else self._invmaps[i](x)


def partial_apply(spec, word, x):
    """Value of the partial action of ``word`` at ``x``, or ``None``."""
    if isinstance(word, str):
        word = parse_word(word, spec.generators)
    for letter in reversed(reduce_word(word)):
        x = spec.step(letter, x)
        if x is None:
            return None
    return x


def _normal(spec, word, x):
    while word:
        y = spec.step(word[-1], x)
        if y is None:
            break
        word, x = word[:-1], y
    return word, x


# -- globalization ----------------------------------------------------------

class GlobClass(NamedTuple):
    id: int
    word: tuple
    point: object
    depth: int


@dataclass
class GlobalizationBall:
    spec: PartialActionSpec
    radius: int
    classes: list
    edges: dict  # (class id, letter) -> class id, or None if outside the ball
    index: dict  # (word, point) normal form -> class id

    @property
    def letters(self):
        n = len(self.spec.generators)
        return sorted((s for i in range(1, n + 1) for s in (i, -i)), key=_letter_key)

    @property
    def boundary(self):
        """Classes at the outer radius with a neighbour outside the ball."""
        return [c.id for c in self.classes
                if c.depth == self.radius
                and any(self.edges[(c.id, s)] is None for s in self.letters)]

    @property
    def is_closed(self):
        return all(v is not None for v in self.edges.values())

    def class_of(self, word, x):
        w, y = _normal(self.spec, reduce_word(word), x)
        return self.index.get((w, y))

    def act(self, letter, cid):
        return self.edges[(cid, letter)]

    def label(self, cid):
        c = self.classes[cid]
        return (f"({format_word(c.word, self.spec.generators)}, "
                f"{self.spec.format_point(c.point)})")

    def orbits(self):
        """Connected components (by ids) of the ball graph."""
        seen, comps = set(), []
        for c in self.classes:
            if c.id in seen:
                continue
            comp, todo = [], [c.id]
            seen.add(c.id)
            while todo:
                u = todo.pop()
                comp.append(u)
                for s in self.letters:
                    v = self.edges[(u, s)]
                    if v is not None and v not in seen:
                        seen.add(v)
                        todo.append(v)
            comps.append(sorted(comp))
        return comps

    # -- output --
    def to_dict(self):
        names = self.spec.generators
        return {
            "format": FORMAT_HEADER,
            "radius": self.radius,
            "classes": [{"id": c.id, "word": format_word(c.word, names),
                         "point": self.spec.format_point(c.point), "depth": c.depth}
                        for c in self.classes],
            "edges": [[cid, format_word((s,), names), None if t is None else t]
                      for (cid, s), t in sorted(self.edges.items(),
                                                key=lambda kv: (kv[0][0], _letter_key(kv[0][1])))],
            "boundary": self.boundary,
        }

    def to_text(self):
        names = self.spec.generators
        lines = [FORMAT_HEADER,
                 f"ball radius {self.radius} classes {len(self.classes)} "
                 f"boundary {len(self.boundary)}"]
        for c in self.classes:
            lines.append(f"class {c.id} depth {c.depth} word {format_word(c.word, names)} "
                         f"point {self.spec.format_point(c.point)}")
        for c in self.classes:
            for s in self.letters:
                t = self.edges[(c.id, s)]
                lines.append(f"edge {c.id} {format_word((s,), names)} "
                             f"{'-' if t is None else t}")
        lines.append("boundary " + (" ".join(map(str, self.boundary)) or "-"))
        return "\n".join(lines) + "\n"

    def to_dot(self):
        names = self.spec.generators
        bnd = set(self.boundary)
        lines = [f"// {FORMAT_HEADER}", "digraph ball {"]
        for c in self.classes:
            shape = "doublecircle" if c.id in bnd else "circle"
            lines.append(f'  n{c.id} [label="{self.label(c.id)}", shape={shape}];')
        for c in self.classes:
            for i in range(1, len(names) + 1):
                t = self.edges[(c.id, i)]
                if t is not None:
                    lines.append(f'  n{c.id} -> n{t} [label="{names[i - 1]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def globalize_ball(spec, radius, seeds=None):
    """Breadth-first ball of the given radius around the seed copy of X."""
    seeds = list(spec.seeds if seeds is None else seeds)
    if not seeds:
        raise RadiusZeroWithEmptySeeds("no seed points")
    seeds = sorted(dict.fromkeys(seeds), key=spec.point_key)
    classes, index, edges = [], {}, {}
    for x in seeds:
        index[((), x)] = len(classes)
        classes.append(GlobClass(len(classes), (), x, 0))
    n = len(spec.generators)
    letters = sorted((s for i in range(1, n + 1) for s in (i, -i)), key=_letter_key)
    level = list(classes)
    for depth in range(radius + 1):
        new = {}
        for c in level:
            for s in letters:
                w = c.word
                w = w[1:] if w and w[0] == -s else (s,) + w
                nf = _normal(spec, w, c.point)
                if nf in index:
                    edges[(c.id, s)] = index[nf]
                elif depth < radius:
                    new.setdefault(nf, []).append((c.id, s))
                else:
                    edges[(c.id, s)] = None
        order = sorted(new, key=lambda nf: (word_key(nf[0]), spec.point_key(nf[1])))
        level = []
        for nf in order:
            cid = len(classes)
            index[nf] = cid
            gc = GlobClass(cid, nf[0], nf[1], depth + 1)
            classes.append(gc)
            level.append(gc)
            for src, s in new[nf]:
                edges[(src, s)] = cid
    # edges of the last level were filled above; inverse edges into new classes
    for c in classes:
        for s in letters:
            if (c.id, s) not in edges:
                w = c.word
                w = w[1:] if w and w[0] == -s else (s,) + w
                edges[(c.id, s)] = index.get(_normal(spec, w, c.point))
    return GlobalizationBall(spec, radius, classes, edges, index)


# -- commensuration, trimming, ends -------------------------------------------

class Commensuration(NamedTuple):
    difference: tuple
    stale: bool


def commensurated_check(ball, subset, letters=None):
    """``Y0 xor s Y0`` for each letter ``s``, computed inside the ball."""
    subset = set(subset)
    letters = ball.letters if letters is None else letters
    names = ball.spec.generators
    bnd = set(ball.boundary)
    out = {}
    for s in letters:
        image = set()
        for c in subset:
            t = ball.edges[(c, s)]
            if t is None:
                raise BallTooSmall(f"{ball.label(c)} leaves the ball under "
                                   f"{format_word((s,), names)}; raise the radius")
            image.add(t)
        diff = tuple(sorted(subset ^ image))
        out[format_word((s,), names)] = Commensuration(diff, any(d in bnd for d in diff))
    return out


class TrimResult(NamedTuple):
    y: tuple
    removed_orbits: tuple
    witnesses: dict  # F (tuple of ids) -> word translating F into X


def _translate_into(ball, F, target, max_states=100000):
    start = tuple(F)
    if set(start) <= target:
        return ()
    seen = {start: ()}
    todo = deque([start])
    while todo and len(seen) < max_states:
        state = todo.popleft()
        for s in ball.letters:
            nxt = tuple(ball.edges[(c, s)] for c in state)
            if None in nxt or nxt in seen:
                continue
            w = seen[state]
            word = w[1:] if w and w[0] == -s else (s,) + w
            seen[nxt] = word
            if set(nxt) <= target:
                return word
            todo.append(nxt)
    return None


def neumann_trim(ball, x_subset, y0=None, bound=3):
    """Drop the finite orbits of ``Y0`` that meet ``Y0 \\ X``.

    ``ball`` must be closed (every edge defined), i.e. a finite Gamma-set.
    ``Y0`` defaults to the union of the orbits meeting ``X``.  Every nonempty
    ``F`` of size at most ``bound`` inside the result is translated into
    ``X`` by breadth-first search; the witnessing words are returned.
    """
    if not ball.is_closed:
        raise NotClosed("the ball has boundary; finite orbits cannot be certified")
    x_subset = set(x_subset)
    orbits = ball.orbits()
    if y0 is None:
        y0 = {c for orb in orbits if x_subset & set(orb) for c in orb}
    y0 = set(y0)
    for orb in orbits:
        if 0 < len(y0 & set(orb)) < len(orb):
            raise ValidationError("Y0 is not invariant")
    defect = y0 - x_subset
    removed = tuple(tuple(orb) for orb in orbits if defect & set(orb))
    y = y0 - {c for orb in removed for c in orb}
    witnesses = {}
    for size in range(1, bound + 1):
        for F in itertools.combinations(sorted(y), size):
            witnesses[F] = _translate_into(ball, F, x_subset)
    return TrimResult(tuple(sorted(y)), removed, witnesses)


class EndsReport(NamedTuple):
    counts: tuple  # (radius, components touching the boundary)
    estimate: int
    stable_from: int


def ends_estimate(ball, collar):
    """Lower-bound heuristic for the number of ends of the Schreier graph.

    For each radius ``rho`` with ``collar < rho <= r`` count the components
    of the shell ``rho - collar < depth <= rho`` that reach the boundary of
    the ``rho``-ball.  The counts are reported so stabilization is visible.
    """
    r = ball.radius
    if not r > collar >= 1:
        raise ValidationError("need radius > collar >= 1")
    depth = {c.id: c.depth for c in ball.classes}
    counts = []
    for rho in range(collar + 1, r + 1):
        shell = {c for c, d in depth.items() if rho - collar < d <= rho}

        def leaves(c):
            return any((t := ball.edges[(c, s)]) is None or depth[t] > rho
                       for s in ball.letters)

        seen, n = set(), 0
        for c in sorted(shell):
            if c in seen:
                continue
            comp, todo = [], [c]
            seen.add(c)
            while todo:
                u = todo.pop()
                comp.append(u)
                for s in ball.letters:
                    v = ball.edges[(u, s)]
                    if v in shell and v not in seen:
                        seen.add(v)
                        todo.append(v)
            if any(depth[u] == rho and leaves(u) for u in comp):
                n += 1
        counts.append((rho, n))
    if not counts:
        return EndsReport((), 0, r)
    final = counts[-1][1]
    stable = counts[-1][0]
    for rho, n in reversed(counts):
        if n != final:
            break
        stable = rho
    return EndsReport(tuple(counts), final, stable)


# -- axioms -----------------------------------------------------------------

class AxiomReport(NamedTuple):
    words: int
    points: int
    checks: int


def _sample_points(spec, samples, seed):
    if spec.is_finite:
        return list(spec.points)
    rng = random.Random(seed)
    pts = list(spec.seeds)
    for _ in range(samples):
        v = Fraction(rng.randrange(0, 97), 97) if spec.model == pw.CIRC else \
            Fraction(rng.randrange(-500, 500), rng.randrange(1, 25))
        pts.append(ProjPoint(v))
    # images of seeds exercise the domains' edges
    for f in spec.maps:
        pts.extend(f(p) for p in list(spec.seeds))
    return list(dict.fromkeys(pts))


def verify_axioms(spec, length, samples=20, seed=0, relations=None):
    """Check the three partial-action axioms on all word pairs up to ``length``.

    Asserted relations ``r`` are checked to act as the identity wherever
    ``r`` is defined on the sample.
    """
    words = all_words(len(spec.generators), length)
    pts = _sample_points(spec, samples, seed)
    checks = 0
    for x in pts:
        if partial_apply(spec, (), x) != x:
            raise AxiomViolation("identity axiom fails", ((), x))
    memo = {}

    def value(w, x):
        # reduced words act right to left; share the work on common suffixes
        key = (w, x)
        if key not in memo:
            if not w:
                memo[key] = x
            else:
                y = spec.step(w[-1], x)
                memo[key] = None if y is None else value(w[:-1], y)
        return memo[key]

    for w in words:
        winv = word_inverse(w)
        for x in pts:
            y = value(w, x)
            if y is not None:
                checks += 1
                if value(winv, y) != x:
                    raise AxiomViolation("inverse axiom fails", (w, x))
    for w1 in words:
        for w2 in words:
            w12 = reduce_word(w1 + w2)
            for x in pts:
                y = value(w2, x)
                if y is None:
                    continue
                z = value(w1, y)
                if z is None:
                    continue
                checks += 1
                if value(w12, x) != z:
                    raise AxiomViolation("extension axiom fails", (w1, w2, x))
    for rel in (spec.relations if relations is None else relations):
        rel = parse_word(rel, spec.generators) if isinstance(rel, str) else rel
        for x in pts:
            v = partial_apply(spec, rel, x)
            checks += 1
            if v is not None and v != x:
                raise AxiomViolation(
                    f"relation {format_word(rel, spec.generators)} moves "
                    f"{spec.format_point(x)} to {spec.format_point(v)}", (rel, x))
    return AxiomReport(len(words), len(pts), checks)


# -- spec files -------------------------------------------------------------

def _finite_point(v):
    return v if isinstance(v, int) else str(v)


def load_spec(source, sqrt=None):
    """Build a spec from a JSON string or an already-decoded dict."""
    data = json.loads(source) if isinstance(source, str) else source
    fmt = data.get("format")
    if fmt is not None and fmt != FORMAT_HEADER:
        raise ValidationError(f"unsupported format {fmt!r}")
    sqrt = data.get("sqrt", sqrt)
    gens = list(data["generators"])
    carrier = data["carrier"]
    relations = list(data.get("relations", []))
    if "finite" in carrier:
        points = [_finite_point(p) for p in carrier["finite"]]
        lookup = {str(p): p for p in points}
        raw = data.get("tables", {})
        tables = []
        for name in gens:
            t = raw.get(name, {})
            pairs = t.items() if isinstance(t, dict) else t
            table = {}
            for k, v in pairs:
                if str(k) not in lookup or str(v) not in lookup:
                    raise ValidationError(f"table of {name}: unknown point {k!r} or {v!r}")
                table[lookup[str(k)]] = lookup[str(v)]
            tables.append(table)
        seeds = data.get("seeds")
        seeds = None if seeds is None else [lookup[str(s)] for s in seeds]
        spec = PartialActionSpec(gens, points=points, tables=tables, seeds=seeds)
    elif "piecewise" in carrier or "maps" in data:
        texts = carrier.get("piecewise") or [data["maps"][g] for g in gens]
        maps = [parse_map(t, sqrt) for t in texts]
        seeds = data.get("seeds")
        seeds = None if seeds is None else [parse_point(str(s), sqrt) for s in seeds]
        spec = PartialActionSpec(gens, maps=maps, seeds=seeds)
    else:
        raise ValidationError("carrier must be 'finite' or 'piecewise'")
    spec.relations = [parse_word(r, gens) for r in relations]
    return spec
