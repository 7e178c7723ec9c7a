"""Kauffman bracket and Jones polynomial, DP against the naive state sum."""

import random

import pytest

from hkf.bracket import (
    jones,
    jones_in_t,
    jones_sqrt_t,
    kauffman_bracket,
    kauffman_bracket_naive,
)
from hkf.diagrams import (
    PlanarDiagram,
    connected_sum,
    mirror,
    reverse_component,
)
from hkf.errors import DiagramError
from hkf.laurent import linvert_var, lmul
from hkf.moves import apply_reidemeister, enumerate_moves

DELTA = {2: -1, -2: -1}


class TestBracketFixtures:
    def test_unknot(self, unknot_free):
        assert kauffman_bracket(unknot_free) == {0: 1}

    def test_two_component_unlink(self):
        d = PlanarDiagram(components=((1,), (2,)), labels=("a", "b"))
        assert kauffman_bracket(d) == DELTA

    def test_kinks(self, positive_kink, negative_kink):
        # A-smoothing of the positive kink leaves two loops, B one loop:
        # A*delta + A^-1 = -A^3, and the mirror image for the other kink.
        assert kauffman_bracket(positive_kink) == {3: -1}
        assert kauffman_bracket(negative_kink) == {-3: -1}

    def test_hopf(self, hopf_plus):
        assert kauffman_bracket(hopf_plus) == {4: -1, -4: -1}

    def test_mirror_inverts_variable(self, left_trefoil, figure_eight):
        for d in (left_trefoil, figure_eight):
            assert kauffman_bracket(mirror(d)) == linvert_var(kauffman_bracket(d))

    def test_vertices_rejected(self):
        d = PlanarDiagram(vertices=((1, 2, 1, 2),), components=((1, 2),))
        with pytest.raises(DiagramError):
            kauffman_bracket(d)


class TestDPAgainstNaive:
    def test_fixtures(
        self, left_trefoil, figure_eight, hopf_plus, positive_kink, unknot_free
    ):
        for d in (left_trefoil, figure_eight, hopf_plus, positive_kink, unknot_free):
            assert kauffman_bracket(d) == kauffman_bracket_naive(d)

    def test_randomized_diagrams(self, left_trefoil, hopf_plus):
        rng = random.Random(11)
        for base in (left_trefoil, hopf_plus):
            for _ in range(15):
                d = base
                while len(d.crossings) < 9:
                    kind = rng.choice(("R1", "R2"))
                    cands = enumerate_moves(d, kinds=(kind,), directions=("add",))
                    mv = rng.choice(cands)
                    d = apply_reidemeister(d, mv[0], mv[2], mv[1])
                assert kauffman_bracket(d) == kauffman_bracket_naive(d)

    def test_explicit_order(self, figure_eight):
        expected = kauffman_bracket_naive(figure_eight)
        for order in ((0, 1, 2, 3), (3, 2, 1, 0), (2, 0, 3, 1)):
            assert kauffman_bracket(figure_eight, order) == expected


class TestJones:
    def test_unknot_is_one(self, unknot_free, positive_kink, negative_kink):
        for d in (unknot_free, positive_kink, negative_kink):
            assert jones(d) == {0: 1}

    def test_left_trefoil(self, left_trefoil):
        assert jones(left_trefoil) == {4: 1, 12: 1, 16: -1}
        assert jones_in_t(left_trefoil) == {-4: -1, -3: 1, -1: 1}

    def test_figure_eight(self, figure_eight):
        assert jones_in_t(figure_eight) == {-2: 1, -1: -1, 0: 1, 1: -1, 2: 1}

    def test_hopf_needs_half_powers(self, hopf_plus):
        assert jones_sqrt_t(hopf_plus) == {1: -1, 5: -1}
        with pytest.raises(DiagramError):
            jones_in_t(hopf_plus)

    def test_mirror_identity(self, left_trefoil, figure_eight, hopf_plus):
        for d in (left_trefoil, figure_eight, hopf_plus):
            assert jones(mirror(d)) == linvert_var(jones(d))

    def test_figure_eight_amphichiral(self, figure_eight):
        assert jones(mirror(figure_eight)) == jones(figure_eight)

    def test_reversal_invariance_for_knots(self, left_trefoil, figure_eight):
        assert jones(reverse_component(left_trefoil, 0)) == jones(left_trefoil)
        assert jones(reverse_component(figure_eight, 0)) == jones(figure_eight)

    def test_reversal_of_one_link_component(self, hopf_plus):
        # reversing a single component turns Hopf+ into Hopf-, which is
        # the mirror; reversing both restores the original value
        one = reverse_component(hopf_plus, 1)
        assert jones(one) == linvert_var(jones(hopf_plus))
        both = reverse_component(one, 0)
        assert jones(both) == jones(hopf_plus)

    def test_connected_sum_multiplicative(self, left_trefoil, figure_eight):
        for d1, d2 in (
            (left_trefoil, left_trefoil),
            (left_trefoil, figure_eight),
            (figure_eight, mirror(left_trefoil)),
        ):
            cs = connected_sum(d1, d2, min(d1.arcs), min(d2.arcs))
            assert jones(cs) == lmul(jones(d1), jones(d2))

    def test_granny_vs_square(self, left_trefoil):
        granny = connected_sum(left_trefoil, left_trefoil, 1, 1)
        square = connected_sum(left_trefoil, mirror(left_trefoil), 1, 1)
        assert jones(granny) != jones(square)
