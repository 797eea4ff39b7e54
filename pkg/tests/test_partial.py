import itertools
import json
import os
import random
from fractions import Fraction as F

import pytest

from pw1d import partial as pa
from pw1d import piecewise as pw
from pw1d.errors import (AxiomViolation, BallTooSmall, NotClosed, RadiusZeroWithEmptySeeds,
                         UnknownGenerator, ValidationError)
from pw1d.scalar import ProjPoint

from conftest import DATA
from oracles import ball_matches_brute

ZW_TABLE = {0: 1, 1: 2, 2: 3, 3: 4}


def zwindow():
    return pa.PartialActionSpec(["a"], points=list(range(5)), tables=[dict(ZW_TABLE)])


def total_cycle(n):
    return pa.PartialActionSpec(["a"], points=list(range(n)),
                                tables=[{i: (i + 1) % n for i in range(n)}])


def seed_copy(ball):
    return [c.id for c in ball.classes if not c.word]


class TestWords:
    def test_reduce(self):
        assert pa.reduce_word((1, -1, 2, 2, -2)) == (2,)
        assert pa.word_inverse((1, 2, -1)) == (1, -2, -1)

    def test_parse_format(self):
        names = ["a", "b"]
        w = pa.parse_word("a b^-1 a", names)
        assert w == (1, -2, 1)
        assert pa.format_word(w, names) == "a b^-1 a"
        assert pa.format_word((), names) == "e"
        with pytest.raises(UnknownGenerator):
            pa.parse_word("c", names)

    def test_shortlex(self):
        words = pa.all_words(2, 2)
        assert words[0] == ()
        assert len(words) == 1 + 4 + 12
        assert sorted(words, key=pa.word_key) == words


class TestPartialApply:
    def test_examples(self):
        sp = zwindow()
        assert pa.partial_apply(sp, (), 3) == 3
        assert pa.partial_apply(sp, "a a", 2) == 4
        assert pa.partial_apply(sp, "a a", 3) is None
        assert pa.partial_apply(sp, "a a^-1", 0) == 0

    def test_unknown_generator(self):
        with pytest.raises(UnknownGenerator):
            pa.partial_apply(zwindow(), "b", 0)

    def test_piecewise_domain(self):
        s = pw.make(pw.CIRC, [(0, pw.mb.affine(1, F(1, 2))), (F(1, 2), pw.mb.affine(1, F(-1, 4))),
                              (F(3, 4), pw.mb.affine(1, F(-3, 4)))])
        sp = pa.PartialActionSpec(["s"], maps=[s])
        assert pa.partial_apply(sp, "s", ProjPoint(F(1, 2))) is None
        assert pa.partial_apply(sp, "s", ProjPoint(F(3, 5))) == ProjPoint(F(7, 20))
        # rotations have no singular points, so they are defined everywhere
        r = pa.PartialActionSpec(["r"], maps=[pw.rotation(F(1, 3))])
        assert pa.partial_apply(r, "r r r", ProjPoint(F(2, 3))) == ProjPoint(F(2, 3))


class TestBall:
    def test_zwindow_sizes(self):
        sp = zwindow()
        b1 = pa.globalize_ball(sp, 1)
        assert len(b1.classes) == 7 and len(b1.boundary) == 2
        assert [b1.label(c) for c in (5, 6)] == ["(a, 4)", "(a^-1, 0)"]
        for r in range(1, 11):
            assert len(pa.globalize_ball(sp, r).classes) == 5 + 2 * r

    def test_total_action(self):
        sp = pa.load_spec(open(os.path.join(DATA, "total.spec")).read())
        for r in range(4):
            b = pa.globalize_ball(sp, r)
            assert len(b.classes) == 4 and b.boundary == [] and b.is_closed

    def test_empty_seeds(self):
        with pytest.raises(RadiusZeroWithEmptySeeds):
            pa.globalize_ball(zwindow(), 2, seeds=[])

    def test_monotone_and_inverse_consistent(self):
        sp = pa.PartialActionSpec(["a", "b"], points=[0, 1, 2, 3],
                                  tables=[{0: 1, 1: 2}, {3: 0, 2: 2}])
        prev = None
        for r in range(5):
            b = pa.globalize_ball(sp, r)
            for (c, s), t in b.edges.items():
                if t is not None:
                    assert b.edges[(t, -s)] == c
            if prev is not None:
                assert b.classes[:len(prev.classes)] == prev.classes
                for key, t in prev.edges.items():
                    if t is not None:
                        assert b.edges[key] == t
            prev = b

    def test_seed_injective(self):
        b = pa.globalize_ball(zwindow(), 3)
        assert len({b.class_of((), x) for x in range(5)}) == 5

    def test_outputs_are_deterministic(self):
        a = pa.globalize_ball(zwindow(), 2)
        b = pa.globalize_ball(zwindow(), 2)
        assert a.to_text() == b.to_text() and a.to_dot() == b.to_dot()
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
        assert a.to_text().startswith("pw1d-format 1\nball radius 2 classes 9 boundary 2\n")
        assert "doublecircle" in a.to_dot()

    def test_brute_force_two_generators(self):
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randint(1, 5)
            pts = list(range(n))
            tables = []
            for _ in range(2):
                k = rng.randint(0, n)
                dom = rng.sample(pts, k)
                tables.append(dict(zip(dom, rng.sample(pts, k))))
            sp = pa.PartialActionSpec(["a", "b"], points=pts, tables=tables)
            for r in range(4):
                assert ball_matches_brute(pa.globalize_ball(sp, r), pts, tables) == []

    def test_piecewise_ball(self):
        r = pw.rotation(F(1, 3))
        sp = pa.PartialActionSpec(["r"], maps=[r])
        b = pa.globalize_ball(sp, 3)
        # the orbit of the cut point 0 under the rotation is finite
        assert b.is_closed and len(b.classes) == 3


class TestCommensurated:
    def test_zwindow(self):
        b = pa.globalize_ball(zwindow(), 3)
        res = pa.commensurated_check(b, seed_copy(b))
        assert [b.label(c) for c in res["a"].difference] == ["(e, 0)", "(a, 4)"]
        assert len(res["a"].difference) == len(res["a^-1"].difference) == 2
        assert not res["a"].stale

    def test_invariant_subset(self):
        b = pa.globalize_ball(total_cycle(5), 2)
        res = pa.commensurated_check(b, seed_copy(b))
        assert all(v.difference == () for v in res.values())

    def test_single_point(self):
        b = pa.globalize_ball(total_cycle(5), 2)
        y = b.class_of((), 2)
        res = pa.commensurated_check(b, [y])
        assert res["a"].difference == (y, b.class_of((), 3))

    def test_ball_too_small(self):
        b = pa.globalize_ball(zwindow(), 1)
        with pytest.raises(BallTooSmall):
            pa.commensurated_check(b, [5])


class TestNeumannTrim:
    def spec(self):
        # orbits {0, 1, 2} and {3, 4, 5}; X misses the point 5
        return pa.PartialActionSpec(["a"], points=list(range(6)),
                                    tables=[{0: 1, 1: 2, 2: 0, 3: 4, 4: 5, 5: 3}])

    def test_removes_the_orbit(self):
        sp = self.spec()
        b = pa.globalize_ball(sp, 2)
        x = [b.class_of((), i) for i in range(5)]
        res = pa.neumann_trim(b, x, y0=seed_copy(b))
        assert res.removed_orbits == (tuple(b.class_of((), i) for i in (3, 4, 5)),)
        assert res.y == tuple(b.class_of((), i) for i in (0, 1, 2))
        for size in range(1, 4):
            for F_ in itertools.combinations(res.y, size):
                word = res.witnesses[F_]
                moved = {b.class_of(word, b.classes[c].point) for c in F_}
                assert moved <= set(x)

    def test_nothing_to_remove(self):
        b = pa.globalize_ball(self.spec(), 2)
        res = pa.neumann_trim(b, seed_copy(b))
        assert res.removed_orbits == () and len(res.y) == 6

    def test_not_closed(self):
        with pytest.raises(NotClosed):
            pa.neumann_trim(pa.globalize_ball(zwindow(), 3), [0])

    def test_invariance_required(self):
        b = pa.globalize_ball(self.spec(), 2)
        with pytest.raises(ValidationError):
            pa.neumann_trim(b, [0], y0=[0])


class TestEnds:
    def test_line(self):
        rep = pa.ends_estimate(pa.globalize_ball(zwindow(), 6), 2)
        assert rep.estimate == 2 and rep.stable_from == 3
        assert rep.counts == tuple((r, 2) for r in range(3, 7))

    def test_finite(self):
        assert pa.ends_estimate(pa.globalize_ball(total_cycle(4), 4), 2).estimate == 0

    def test_two_lines(self):
        table = dict(ZW_TABLE)
        table.update({10: 11, 11: 12, 12: 13})
        sp = pa.PartialActionSpec(["a"], points=[0, 1, 2, 3, 4, 10, 11, 12, 13],
                                  tables=[table])
        assert pa.ends_estimate(pa.globalize_ball(sp, 6), 2).estimate == 4

    def test_bad_collar(self):
        with pytest.raises(ValidationError):
            pa.ends_estimate(pa.globalize_ball(zwindow(), 2), 2)


class TestAxioms:
    def test_finite(self):
        rep = pa.verify_axioms(zwindow(), 3)
        assert rep.checks > 0

    def test_rotations(self):
        sp = pa.PartialActionSpec(["a", "b"], maps=[pw.rotation(F(1, 3)), pw.rotation(F(1, 4))])
        assert pa.verify_axioms(sp, 3, samples=8).checks > 0

    def test_relation_violation(self):
        sp = pa.PartialActionSpec(["a"], maps=[pw.rotation(F(1, 3))])
        with pytest.raises(AxiomViolation) as info:
            pa.verify_axioms(sp, 2, relations=[(1, 1)])
        assert info.value.witness is not None

    def test_valid_relation(self):
        sp = pa.PartialActionSpec(["a"], maps=[pw.rotation(F(1, 2))])
        pa.verify_axioms(sp, 2, relations=[(1, 1)])


class TestSpecFiles:
    def test_zwindow_file(self):
        sp = pa.load_spec(open(os.path.join(DATA, "zwindow.spec")).read())
        assert len(pa.globalize_ball(sp, 2).classes) == 9

    def test_piecewise_file(self):
        sp = pa.load_spec({"generators": ["r"],
                           "carrier": {"piecewise": ["circ{ [0: 1,1/3] [2/3: 1,-2/3] }"]},
                           "relations": ["r r r"]})
        assert sp.relations == [(1, 1, 1)]
        pa.verify_axioms(sp, 2)

    def test_bad_table(self):
        with pytest.raises(ValidationError):
            pa.load_spec({"generators": ["a"], "carrier": {"finite": [0, 1]},
                          "tables": {"a": {"0": 5}}})
        with pytest.raises(ValidationError):
            pa.load_spec({"generators": ["a"], "carrier": {"finite": [0, 1]},
                          "tables": {"a": {"0": 1, "1": 1}}})
