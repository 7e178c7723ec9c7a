"""Reidemeister move engine: enumeration, application, simplification."""

import random

import pytest

from hkf.bracket import jones
from hkf.diagrams import (
    PlanarDiagram,
    canonical_form,
    linking_number,
    validate,
    writhe,
)
from hkf.errors import MoveError
from hkf.moves import (
    apply_reidemeister,
    enumerate_moves,
    simplify,
    simplify_with_trace,
)

# A 9-crossing unknotted-up trefoil whose greedy reduction stalls unless
# a Reidemeister III slide is found first.
STUCK_TREFOIL = PlanarDiagram(
    crossings=(
        (19, 4, 2, 20),
        (20, 13, 5, 14),
        (5, 16, 6, 8),
        (10, 7, 9, 3),
        (9, 7, 1, 8),
        (11, 11, 12, 6),
        (2, 12, 16, 13),
        (1, 10, 19, 14),
        (3, 4, 17, 17),
    ),
    components=((1, 19, 2, 16, 8, 7, 3, 17, 4, 20, 5, 6, 11, 12, 13, 14, 10, 9),),
    labels=("k",),
)


def _apply(d, mv):
    return apply_reidemeister(d, mv[0], mv[2], mv[1])


class TestR1:
    def test_add_remove_roundtrip(self, left_trefoil):
        base = canonical_form(left_trefoil)
        n = len(left_trefoil.crossings)
        for variant in range(4):
            d2 = apply_reidemeister(left_trefoil, "R1", (1, variant), "add")
            assert validate(d2) == []
            assert len(d2.crossings) == n + 1
            assert jones(d2) == jones(left_trefoil)
            d3 = apply_reidemeister(d2, "R1", (n,), "remove")
            assert canonical_form(d3) == base

    def test_writhe_shift(self, left_trefoil):
        for variant, shift in ((0, 1), (1, -1), (2, 1), (3, -1)):
            d2 = apply_reidemeister(left_trefoil, "R1", (1, variant), "add")
            assert writhe(d2) == writhe(left_trefoil) + shift

    def test_free_loop_kink(self, unknot_free):
        d2 = apply_reidemeister(unknot_free, "R1", (1, 0), "add")
        assert validate(d2) == []
        assert len(d2.crossings) == 1
        d3 = apply_reidemeister(d2, "R1", (0,), "remove")
        assert d3.is_free_loop(0)

    def test_kink_removal(self, positive_kink, negative_kink):
        for d in (positive_kink, negative_kink):
            out = apply_reidemeister(d, "R1", (0,), "remove")
            assert len(out.crossings) == 0

    def test_non_kink_rejected(self, left_trefoil):
        with pytest.raises(MoveError):
            apply_reidemeister(left_trefoil, "R1", (0,), "remove")


class TestR2:
    def test_add_remove_roundtrip_everywhere(
        self, left_trefoil, figure_eight, hopf_plus
    ):
        for base in (left_trefoil, figure_eight, hopf_plus):
            ref = canonical_form(base)
            n = len(base.crossings)
            for mv in enumerate_moves(base, kinds=("R2",), directions=("add",)):
                d2 = _apply(base, mv)
                assert validate(d2) == []
                assert jones(d2) == jones(base)
                assert writhe(d2) == writhe(base)
                d3 = apply_reidemeister(d2, "R2", (n, n + 1), "remove")
                assert canonical_form(d3) == ref

    def test_linking_number_invariant(self, hopf_plus):
        for mv in enumerate_moves(hopf_plus, kinds=("R2",), directions=("add",)):
            d2 = _apply(hopf_plus, mv)
            assert linking_number(d2, "a", "b") == 1

    def test_clasp_is_not_removable(self, hopf_plus):
        assert enumerate_moves(hopf_plus, kinds=("R2",), directions=("remove",)) == []

    def test_fresh_bigon_is_removable(self, left_trefoil):
        mv = enumerate_moves(left_trefoil, kinds=("R2",), directions=("add",))[0]
        d2 = _apply(left_trefoil, mv)
        assert ("R2", "remove", (3, 4)) in enumerate_moves(
            d2, kinds=("R2",), directions=("remove",)
        )


class TestR3:
    def test_alternating_diagrams_have_no_sites(self, left_trefoil, figure_eight):
        assert enumerate_moves(left_trefoil, kinds=("R3",)) == []
        assert enumerate_moves(figure_eight, kinds=("R3",)) == []

    def test_slides_after_r2(self, left_trefoil):
        jref = jones(left_trefoil)
        seen = 0
        for mv in enumerate_moves(left_trefoil, kinds=("R2",), directions=("add",)):
            d2 = _apply(left_trefoil, mv)
            for site in enumerate_moves(d2, kinds=("R3",)):
                d3 = _apply(d2, site)
                assert validate(d3) == []
                assert len(d3.crossings) == len(d2.crossings)
                assert writhe(d3) == writhe(d2)
                assert jones(d3) == jref
                seen += 1
        assert seen > 0

    def test_slides_are_reversible(self, left_trefoil):
        mv = enumerate_moves(left_trefoil, kinds=("R2",), directions=("add",))[1]
        d2 = _apply(left_trefoil, mv)
        ref = canonical_form(d2)
        for site in enumerate_moves(d2, kinds=("R3",)):
            d3 = _apply(d2, site)
            images = {
                canonical_form(_apply(d3, back))
                for back in enumerate_moves(d3, kinds=("R3",))
            }
            assert ref in images

    def test_illegal_site_rejected(self, left_trefoil):
        with pytest.raises(MoveError):
            apply_reidemeister(left_trefoil, "R3", ((1, 0), (2, 0), (3, 0)), "apply")


class TestFuzz:
    def test_random_move_chains_preserve_jones(
        self, left_trefoil, figure_eight, hopf_plus
    ):
        rng = random.Random(3)
        for base in (left_trefoil, figure_eight, hopf_plus):
            jref = jones(base)
            for _ in range(6):
                d = base
                for _ in range(6):
                    kind = rng.choice(("R1", "R2", "R3"))
                    direction = "apply" if kind == "R3" else "add"
                    cands = enumerate_moves(d, kinds=(kind,), directions=(direction,))
                    if not cands:
                        continue
                    d = _apply(d, rng.choice(cands))
                    assert validate(d) == []
                assert jones(d) == jref

    def test_linking_number_under_all_moves(self, hopf_plus):
        rng = random.Random(5)
        d = hopf_plus
        for _ in range(14):
            cands = enumerate_moves(d, directions=("add", "remove", "apply"))
            growing = [m for m in cands if m[1] != "remove"]
            d = _apply(d, rng.choice(growing or cands))
            assert linking_number(d, "a", "b") == 1


class TestSimplify:
    def test_kink_with_witness(self, positive_kink):
        out, trail = simplify_with_trace(positive_kink)
        assert len(out.crossings) == 0
        assert trail == [("R1", "remove", (0,))]

    def test_trefoil_is_a_fixed_point(self, left_trefoil):
        out = simplify(left_trefoil)
        assert canonical_form(out) == canonical_form(left_trefoil)

    def test_budget_zero_is_identity(self, left_trefoil):
        d2 = apply_reidemeister(left_trefoil, "R1", (1, 0), "add")
        assert canonical_form(simplify(d2, budget=0)) == canonical_form(d2)

    def test_stacked_kinks(self, left_trefoil):
        d = left_trefoil
        for variant in range(4):
            d = apply_reidemeister(d, "R1", (1, variant), "add")
        out, trail = simplify_with_trace(d)
        assert canonical_form(out) == canonical_form(left_trefoil)
        assert len(trail) == 4

    def test_r3_search_unsticks(self):
        stuck = simplify(STUCK_TREFOIL, r3_depth=0)
        out, trail = simplify_with_trace(STUCK_TREFOIL)
        assert len(stuck.crossings) == 4
        assert len(out.crossings) == 3
        assert any(mv[0] == "R3" for mv in trail)
        assert jones(out) == jones(STUCK_TREFOIL)

    def test_deterministic(self, figure_eight):
        d = apply_reidemeister(figure_eight, "R1", (3, 2), "add")
        first = simplify_with_trace(d)
        second = simplify_with_trace(d)
        assert first == second


class TestEnumerate:
    def test_sorted_and_stable(self, left_trefoil):
        moves = enumerate_moves(left_trefoil)
        assert moves == sorted(moves)
        assert moves == enumerate_moves(left_trefoil)

    def test_kind_filtering(self, left_trefoil):
        only_r1 = enumerate_moves(left_trefoil, kinds=("R1",))
        assert only_r1 and all(m[0] == "R1" for m in only_r1)
        removals = enumerate_moves(left_trefoil, directions=("remove",))
        assert removals == []
