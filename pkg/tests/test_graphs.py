import math
from itertools import permutations

import pytest

from hkf.graphs import (
    Graph,
    canonical_cycle,
    choose_n,
    complete_graph,
    cycle_edges,
    enumerate_cycles,
)


def closed_form_count(n):
    # sum over cycle lengths k of n! / ((n-k)! * 2k)
    return sum(
        math.factorial(n) // (math.factorial(n - k) * 2 * k) for k in range(3, n + 1)
    )


def brute_force_cycles(g):
    """Independent oracle: canonicalize every closed vertex tour."""
    found = set()
    verts = range(1, g.vertex_count + 1)
    for k in range(3, g.vertex_count + 1):
        for perm in permutations(verts, k):
            ok = all(
                g.has_edge(perm[i], perm[(i + 1) % k]) for i in range(k)
            )
            if ok:
                found.add(canonical_cycle(perm))
    return sorted(found)


def test_complete_graph_edge_counts():
    assert len(complete_graph(3).edges) == 3
    assert len(complete_graph(7).edges) == 21
    assert len(complete_graph(1).edges) == 0
    with pytest.raises(ValueError):
        complete_graph(0)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        Graph(3, frozenset({(2, 1)}))
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 4)}))


def test_choose_n():
    assert choose_n(Graph(3, frozenset({(1, 2), (2, 3)}))) == 3
    assert choose_n(complete_graph(4)) == 5
    assert choose_n(complete_graph(7)) == 7
    assert choose_n(Graph(1)) == 3


def test_canonical_cycle():
    assert canonical_cycle((3, 1, 2)) == (1, 2, 3)
    assert canonical_cycle((5, 3, 1, 4)) == (1, 3, 5, 4)
    assert canonical_cycle((1, 4, 3, 2)) == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        canonical_cycle((1, 2))
    with pytest.raises(ValueError):
        canonical_cycle((1, 2, 1))


def test_cycle_counts_match_formula():
    for n in range(3, 9):
        cycles = enumerate_cycles(complete_graph(n))
        assert len(cycles) == closed_form_count(n)
    assert len(enumerate_cycles(complete_graph(3))) == 1
    assert len(enumerate_cycles(complete_graph(4))) == 7
    assert len(enumerate_cycles(complete_graph(5))) == 37


def test_matches_brute_force_oracle():
    for n in range(3, 7):
        g = complete_graph(n)
        assert enumerate_cycles(g) == brute_force_cycles(g)


def test_cycles_are_canonical_and_valid():
    g = complete_graph(6)
    cycles = enumerate_cycles(g)
    assert len(set(cycles)) == len(cycles)
    for c in cycles:
        assert c == canonical_cycle(c)
        for u, v in cycle_edges(c):
            assert g.has_edge(u, v)


def test_hamiltonian_count():
    cycles = enumerate_cycles(complete_graph(5))
    ham = [c for c in cycles if len(c) == 5]
    assert len(ham) == math.factorial(4) // 2  # 12


def test_non_complete_graph():
    # 4-cycle plus one chord: cycles are two triangles and the square
    g = Graph(4, frozenset({(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)}))
    assert enumerate_cycles(g) == [(1, 2, 3), (1, 2, 3, 4), (1, 3, 4)]
