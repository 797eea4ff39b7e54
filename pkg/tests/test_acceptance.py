"""Acceptance criteria, one test per criterion; a summary line is printed for each."""

import functools
import itertools
import time
from fractions import Fraction as F

import pytest

import clidocs
from oracles import ball_matches_brute, circ_eval, homography_value, partial_injections, proj_eval
from pw1d import moebius as mb
from pw1d import partial as pa
from pw1d import piecewise as pw
from pw1d import regularize as rg
from pw1d import sampling as sm
from pw1d.moebius import Homography
from pw1d.scalar import INF, ProjPoint
from pw1d.textio import format_map, parse_map, parse_maps

from conftest import DATA

criterion = pytest.mark.criterion


@functools.lru_cache(maxsize=None)
def corpus_triples(count=1000, seed=1):
    rng = sm.rng_from(seed)
    out = []
    for i in range(count):
        model = pw.CIRC if i % 2 == 0 else pw.PROJ
        out.append(tuple(sm.random_map(rng, model) for _ in range(3)))
    return tuple(out)


def within_bounds(f):
    if len(f.pieces) > 6:
        return False
    return all(l.is_inf or l.value.denominator <= 24 for l, _ in f.pieces)


def raw_value(f, x):
    """Evaluate ``f`` at ``x`` from its raw piece formulas (independent of apply_at)."""
    if f.model == pw.CIRC:
        raw = []
        for l, h in f.pieces:
            a, b, _, d = h.entries
            raw.append((l.value, F(a) / d, F(b) / d))
        return ProjPoint(circ_eval(raw, x.value))
    raw = [(None if l.is_inf else l.value, h.entries) for l, h in f.pieces]
    v = proj_eval(raw, None if x.is_inf else x.value)
    return INF if v is None else ProjPoint(v)


@criterion(1, "group laws on 1000 random triples")
def test_group_laws():
    start = time.perf_counter()  # corpus generation included
    for f, g, h in corpus_triples():
        assert all(within_bounds(m) for m in (f, g, h))
        e = pw.identity(f.model)
        assert pw.compose(f, pw.compose(g, h)) == pw.compose(pw.compose(f, g), h)
        assert pw.compose(pw.inverse(f), f) == e == pw.compose(f, pw.inverse(f))
        assert pw.compose(f, e) == f == pw.compose(e, f)
        assert pw.canonicalize(pw.canonicalize(f)) == pw.canonicalize(f) == f
    assert time.perf_counter() - start < 30


@criterion(2, "breakpoint bound and pointwise double evaluation")
def test_breakpoints_and_pointwise():
    rng = sm.rng_from(2)
    for f, g, _ in corpus_triples():
        fg = pw.compose(f, g)
        assert len(pw.breakpoints(fg)) <= len(pw.breakpoints(f)) + len(pw.breakpoints(g))
        bad_f = set(pw.breakpoints(f))
        checked = 0
        while checked < 100:
            x, = sm.random_points(rng, [g, fg], 1)
            gx = raw_value(g, x)
            if gx in bad_f:
                continue
            assert raw_value(fg, x) == raw_value(f, gx)
            checked += 1


@criterion(3, "chain rule and continuity fixtures")
def test_chain_rule_and_fixtures():
    rng = sm.rng_from(3)
    done = 0
    while done < 500:
        m1, m2 = ([rng.randint(-5, 5) for _ in range(4)] for _ in range(2))
        if m1[0] * m1[3] == m1[1] * m1[2] or m2[0] * m2[3] == m2[1] * m2[2]:
            continue
        x = F(rng.randint(-60, 60), rng.randint(1, 12))
        hx = homography_value(m2, x)
        if hx is None or homography_value(m1, hx) is None:
            continue
        g, h = Homography(*m1), Homography(*m2)
        lhs = mb.derivative_at(mb.compose(g, h), ProjPoint(x))
        assert lhs == mb.derivative_at(g, ProjPoint(hx)) * mb.derivative_at(h, ProjPoint(x))
        done += 1
    r2 = parse_map("circ{ [0: 1,1/2] [1/2: 1,-1/2] }")
    assert len(r2.pieces) == 2
    assert pw.is_continuous(r2) and pw.is_C1(r2) and pw.is_IET(r2)
    # lengths (1/4, 1/2, 1/4) in reversed order: an involution
    t = parse_map("circ{ [0: 1,3/4] [1/4: 1,0] [3/4: 1,-3/4] }")
    assert pw.compose(t, t) == pw.identity(pw.CIRC)
    assert pw.is_IET(t) and not pw.is_continuous(t)
    s = parse_map("circ{ [0: 1,1/2] [1/2: 1,-1/4] [3/4: 1,-3/4] }")
    assert pw.is_IET(s) and not pw.is_continuous(s)


@criterion(4, "globalization against the brute-force quotient")
def test_globalization_oracle():
    mismatches, cases = 0, 0
    for n in range(1, 7):
        pts = list(range(n))
        for table in partial_injections(n, n - 2):
            sp = pa.PartialActionSpec(["a"], points=pts, tables=[table])
            for r in range(5):
                cases += 1
                if ball_matches_brute(pa.globalize_ball(sp, r), pts, [table]):
                    mismatches += 1
    assert cases > 1000
    assert mismatches == 0


@criterion(5, "Z-window: ball sizes, commensuration, two ends")
def test_z_window():
    spec = pa.load_spec(open(f"{DATA}/zwindow.spec").read())
    for r in range(1, 11):
        assert len(pa.globalize_ball(spec, r).classes) == 5 + 2 * r
    ball = pa.globalize_ball(spec, 4)
    x = [ball.class_of((), i) for i in range(5)]
    res = pa.commensurated_check(ball, x)
    assert {len(c.difference) for c in res.values()} == {2}
    rep = pa.ends_estimate(pa.globalize_ball(spec, 10), 2)
    assert rep.estimate == 2 and rep.stable_from == 3
    assert all(n == 2 for r, n in rep.counts if r >= 3)


@criterion(6, "Neumann trimming removes the defective orbit")
def test_neumann_trim():
    # orbits {0,1,2} and {3,4,5}; X misses the point 5 of the second orbit
    sp = pa.PartialActionSpec(["a"], points=list(range(6)),
                              tables=[{0: 1, 1: 2, 2: 0, 3: 4, 4: 5, 5: 3}])
    ball = pa.globalize_ball(sp, 3)
    assert ball.is_closed
    x = [ball.class_of((), i) for i in range(5)]
    y0 = [ball.class_of((), i) for i in range(6)]
    res = pa.neumann_trim(ball, x, y0=y0, bound=3)
    assert res.removed_orbits == (tuple(ball.class_of((), i) for i in (3, 4, 5)),)
    assert set(res.y) == {ball.class_of((), i) for i in (0, 1, 2)}
    subsets = [s for k in (1, 2, 3) for s in itertools.combinations(res.y, k)]
    assert set(res.witnesses) == set(subsets)
    for s in subsets:
        # independent check: push each point along the witness word by hand
        moved = {sp_point for sp_point in
                 (pa.partial_apply(sp, res.witnesses[s], ball.classes[c].point) for c in s)}
        assert None not in moved and moved <= set(range(5))


C = parse_map("circ{ [0: 1/2,0] [1/2: 3/2,-1/2] }")


@criterion(7, "regularization of conjugated rotations of orders 2 and 3")
@pytest.mark.parametrize("n", [2, 3])
def test_regularization(n):
    start = time.perf_counter()
    f = pw.compose(C, pw.compose(pw.rotation(F(1, n)), pw.inverse(C)))
    assert not pw.is_global(f)
    group = rg.enumerate_group([f], 100)
    assert len(group) == n
    man = rg.cut_and_glue(group)
    assert len(man.components()) == 1
    assert rg.classify_component(man, 0) == rg.StandardCircle()
    k = rg.conjugator(group, man)
    assert rg.verify_regularized(group, k)
    assert all(pw.is_global(pw.compose(k, pw.compose(g, pw.inverse(k)))) for g in group)
    assert len(k.pieces) <= 2
    assert time.perf_counter() - start < 1


@criterion(8, "Kuiper classification of chart fixtures")
def test_kuiper_fixtures():
    P = lambda x: ProjPoint(F(x))  # noqa: E731
    single = rg.ChartedManifold(rg.AFFINE, [rg.Arc(0, P(0), P(1))], [])
    translation = rg.ChartedManifold(
        rg.AFFINE, [rg.Arc(0, P(0), P(1))], [rg.Gluing((0, "hi"), (0, "lo"), mb.affine(1, -1))])
    scaling = rg.ChartedManifold(
        rg.AFFINE, [rg.Arc(0, P(1), P(2))],
        [rg.Gluing((0, "hi"), (0, "lo"), mb.affine(F(1, 2), 0))])
    labels = [str(rg.classify_component(m, 0)) for m in (single, translation, scaling)]
    assert labels == ["OpenInterval", "StandardCircle(1)", "NonstandardCircle(2)"]
    chain = rg.ChartedManifold(
        rg.PROJECTIVE, [rg.Arc(0, P(0), INF), rg.Arc(1, INF, P(0))],
        [rg.Gluing((0, "hi"), (1, "lo"), mb.IDENTITY), rg.Gluing((1, "hi"), (0, "lo"), mb.IDENTITY)])
    hol = rg.holonomy(chain, 0)
    assert hol.map == mb.IDENTITY and abs(hol.degree) == 1
    assert str(rg.classify_component(chain, 0)) == "ProjectiveCover(1)"


@criterion(9, "CLI goldens and corpus round trips")
def test_cli_and_corpus():
    cmds = clidocs.commands()
    assert cmds
    for c in cmds:
        with open(clidocs.golden_path(c), encoding="utf-8") as fh:
            assert clidocs.golden_text(c) == fh.read()
    text = open(clidocs.README, encoding="utf-8").read()
    assert clidocs.render_readme(text) == text
    for name, sqrt in (("corpus.maps", None), ("corpus-sqrt2.maps", 2),
                       ("rot2-conjugated.gens", None), ("rot3-conjugated.gens", None),
                       ("id.gens", None), ("id-proj.gens", None)):
        for f in parse_maps(open(f"{DATA}/{name}").read(), sqrt):
            s = format_map(f)
            assert parse_map(s, sqrt) == f and format_map(parse_map(s, sqrt)) == s
