"""Conway a2 by skein recursion, cross-checked against Alexander."""

import random

import pytest

from hkf.alexander import alexander
from hkf.conway import conway_a2, oriented_smoothing, switch_crossing
from hkf.diagrams import (
    PlanarDiagram,
    connected_sum,
    mirror,
    reverse_component,
    validate,
)
from hkf.errors import DiagramError
from hkf.laurent import lderiv, leval_int
from hkf.moves import apply_reidemeister, enumerate_moves


def _a2_from_alexander(d):
    # half the second derivative of the symmetric Alexander polynomial
    # at t = 1, a classical identity used as an independent oracle
    return leval_int(lderiv(lderiv(alexander(d))), 1) // 2


class TestFixtures:
    def test_unknots(self, unknot_free, positive_kink, negative_kink):
        for d in (unknot_free, positive_kink, negative_kink):
            assert conway_a2(d) == 0

    def test_trefoil(self, left_trefoil):
        assert conway_a2(left_trefoil) == 1
        assert conway_a2(mirror(left_trefoil)) == 1

    def test_figure_eight(self, figure_eight):
        assert conway_a2(figure_eight) == -1
        assert conway_a2(reverse_component(figure_eight, 0)) == -1

    def test_links_rejected(self, hopf_plus):
        with pytest.raises(DiagramError):
            conway_a2(hopf_plus)

    def test_cap(self, left_trefoil):
        with pytest.raises(DiagramError):
            conway_a2(left_trefoil, cap=2)
        assert conway_a2(left_trefoil, cap=3) == 1


class TestSkeinPieces:
    def test_switch_flips_sign_only(self, left_trefoil, figure_eight):
        for d in (left_trefoil, figure_eight):
            for i in range(len(d.crossings)):
                sw = switch_crossing(d, i)
                assert validate(sw) == []
                assert sw.trace.signs[i] == -d.trace.signs[i]
                assert switch_crossing(sw, i).crossings == d.crossings

    def test_smoothing_is_valid_and_smaller(self, left_trefoil, figure_eight):
        for d in (left_trefoil, figure_eight):
            for i in range(len(d.crossings)):
                sm = oriented_smoothing(d, i)
                assert validate(sm) == []
                assert len(sm.crossings) == len(d.crossings) - 1

    def test_kink_smoothing_splits_off_a_circle(self, positive_kink):
        sm = oriented_smoothing(positive_kink, 0)
        assert len(sm.components) == 2
        assert sm.crossings == ()


class TestIdentities:
    def test_additive_under_connected_sum(self, left_trefoil, figure_eight):
        for d1, d2 in (
            (left_trefoil, left_trefoil),
            (left_trefoil, figure_eight),
            (figure_eight, mirror(figure_eight)),
        ):
            cs = connected_sum(d1, d2, min(d1.arcs), min(d2.arcs))
            assert conway_a2(cs) == conway_a2(d1) + conway_a2(d2)

    def test_matches_alexander_second_derivative(self, left_trefoil, figure_eight):
        rng = random.Random(23)
        for base in (left_trefoil, figure_eight):
            ref = conway_a2(base)
            for _ in range(6):
                d = base
                for _ in range(5):
                    kind = rng.choice(("R1", "R2", "R3"))
                    direc = "apply" if kind == "R3" else "add"
                    cands = enumerate_moves(d, kinds=(kind,), directions=(direc,))
                    if cands:
                        mv = rng.choice(cands)
                        d = apply_reidemeister(d, mv[0], mv[2], mv[1])
                assert conway_a2(d) == ref
                assert _a2_from_alexander(d) == ref
