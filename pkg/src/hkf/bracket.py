"""Kauffman bracket and Jones polynomial.

Two independent evaluators: a state-sum over all 2^c smoothings for small
diagrams, and a boundary-state dynamic program that merges partial states
sharing the same frontier matching.  Both return Laurent polynomials in
the bracket variable A.  The Jones polynomial is reported in the variable
s = t^(1/2); its exponents are always integers, and they are even exactly
when the usual t-exponents are integers.

The A-smoothing of a crossing joins slot 0 to slot 1 and slot 2 to slot
3; the B-smoothing joins slot 0 to slot 3 and slot 1 to slot 2.
"""

import itertools
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .diagrams import PlanarDiagram, writhe
from .errors import DiagramError
from .laurent import (
    Laurent,
    ladd,
    ldivmod_exact,
    lmono,
    lmul,
    lone,
    lpow,
    lzero,
)

_DELTA: Laurent = {2: -1, -2: -1}  # -A^2 - A^-2

_A_PAIRS = ((0, 1), (2, 3))
_B_PAIRS = ((0, 3), (1, 2))


def _require_link(d: PlanarDiagram) -> None:
    if d.vertices:
        raise DiagramError("bracket is defined for links; smooth the vertices first")


def _plug(d: PlanarDiagram, i: int, s: int) -> Tuple[int, int]:
    """The (arc, occurrence index) endpoint sitting at crossing i, slot s."""
    a = d.crossings[i][s]
    return (a, d.occurrences[a].index(("x", i, s)))


def _free_loop_count(d: PlanarDiagram) -> int:
    return sum(1 for i in range(len(d.components)) if d.is_free_loop(i))


def kauffman_bracket_naive(d: PlanarDiagram) -> Laurent:
    """State sum over all 2^c smoothings; intended as a test oracle."""
    _require_link(d)
    c = len(d.crossings)
    free = _free_loop_count(d)
    if c == 0:
        return lpow(_DELTA, free - 1) if free else lone()

    plugs: List[Tuple[int, int]] = []
    plug_id: Dict[Tuple[int, int], int] = {}
    for a, os in d.occurrences.items():
        for k in range(len(os)):
            plug_id[(a, k)] = len(plugs)
            plugs.append((a, k))
    wire_pairs = [
        (plug_id[(a, 0)], plug_id[(a, 1)])
        for a, os in d.occurrences.items()
        if len(os) == 2
    ]
    slot_plugs = [[plug_id[_plug(d, i, s)] for s in range(4)] for i in range(c)]

    def find(parent: List[int], x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total: Laurent = lzero()
    for choice in itertools.product((1, -1), repeat=c):
        parent = list(range(len(plugs)))
        for pa, pb in wire_pairs:
            parent[find(parent, pa)] = find(parent, pb)
        for i, eps in enumerate(choice):
            for (s1, s2) in _A_PAIRS if eps == 1 else _B_PAIRS:
                ra = find(parent, slot_plugs[i][s1])
                rb = find(parent, slot_plugs[i][s2])
                parent[ra] = rb
        loops = len({find(parent, x) for x in range(len(plugs))}) + free
        term = lmul(lmono(sum(choice), 1), lpow(_DELTA, loops - 1))
        total = ladd(total, term)
    return total


def _greedy_order(d: PlanarDiagram) -> List[int]:
    """Order crossings to keep the frontier of open strands small."""
    c = len(d.crossings)
    neighbors: Dict[int, set] = {i: set() for i in range(c)}
    for a, os in d.occurrences.items():
        xs = [o[1] for o in os if o[0] == "x"]
        if len(xs) == 2 and xs[0] != xs[1]:
            neighbors[xs[0]].add(xs[1])
            neighbors[xs[1]].add(xs[0])
    order = [0]
    seen = {0}
    while len(order) < c:
        best = None
        for i in range(c):
            if i in seen:
                continue
            key = (-len(neighbors[i] & seen), i)
            if best is None or key < best:
                best = key
        order.append(best[1])
        seen.add(best[1])
    return order


def kauffman_bracket(
    d: PlanarDiagram, order: Optional[Sequence[int]] = None
) -> Laurent:
    """Boundary-state evaluation of the bracket.

    States are matchings pairing open strand plugs; processing a crossing
    applies both smoothings to every state and merges results that agree
    on the frontier.  An arc is open exactly when one of its two crossing
    endpoints has been processed; the matching links each open arc to the
    open arc its strand currently connects to.
    """
    _require_link(d)
    c = len(d.crossings)
    free = _free_loop_count(d)
    if c == 0:
        return lpow(_DELTA, free - 1) if free else lone()
    if order is None:
        order = _greedy_order(d)
    if sorted(order) != list(range(c)):
        raise ValueError("order must be a permutation of the crossings")

    def key_of(match: Dict[int, int]) -> FrozenSet[FrozenSet[int]]:
        return frozenset(frozenset(p) for p in match.items())

    states: Dict[FrozenSet, Tuple[Dict[int, int], Laurent]] = {
        frozenset(): ({}, lone())
    }
    for i in order:
        slots = d.crossings[i]
        new_states: Dict[FrozenSet, Tuple[Dict[int, int], Laurent]] = {}
        for match, weight in states.values():
            for pairs, shift in ((_A_PAIRS, 1), (_B_PAIRS, -1)):
                m = dict(match)
                loops = 0
                for (s1, s2) in pairs:
                    x, y = slots[s1], slots[s2]
                    if x == y:
                        # both plugs of one arc meet here: instant loop
                        loops += 1
                        continue
                    tx = m.pop(x, None)
                    if tx is not None and m.get(tx) == x:
                        del m[tx]
                    if tx == y:
                        loops += 1
                        continue
                    ty = m.pop(y, None)
                    if ty is not None and m.get(ty) == y:
                        del m[ty]
                    ex = x if tx is None else tx
                    ey = y if ty is None else ty
                    m[ex] = ey
                    m[ey] = ex
                w = lmul(weight, lmono(shift, 1))
                if loops:
                    w = lmul(w, lpow(_DELTA, loops))
                k = key_of(m)
                if k in new_states:
                    new_states[k] = (m, ladd(new_states[k][1], w))
                else:
                    new_states[k] = (m, w)
        states = new_states

    total = lzero()
    for match, weight in states.values():
        if match:
            raise DiagramError("open strands left after processing all crossings")
        total = ladd(total, weight)
    total = lmul(total, lpow(_DELTA, free))
    return ldivmod_exact(total, _DELTA)


def jones(d: PlanarDiagram, order: Optional[Sequence[int]] = None) -> Laurent:
    """Jones polynomial in the bracket variable A.

    Computed as (-A)^(-3w) times the bracket, where w is the writhe.
    The t-form follows by substituting t^(1/2) = A^(-2); see
    :func:`jones_sqrt_t` and :func:`jones_in_t`.
    """
    br = kauffman_bracket(d, order)
    w = writhe(d)
    return lmul(lmono(-3 * w, 1 if w % 2 == 0 else -1), br)


def jones_sqrt_t(
    d: PlanarDiagram, order: Optional[Sequence[int]] = None
) -> Laurent:
    """Jones polynomial in s = t^(1/2): exponent 2k stands for t^k."""
    out: Laurent = {}
    for e, coef in jones(d, order).items():
        if e % 2:
            raise DiagramError("odd exponent in normalized bracket")
        out[-e // 2] = coef
    return out


def jones_in_t(
    d: PlanarDiagram, order: Optional[Sequence[int]] = None
) -> Laurent:
    """Jones polynomial with integer t-exponents; fails on half powers."""
    out: Laurent = {}
    for e, coef in jones(d, order).items():
        if e % 4:
            raise DiagramError("half-integer t-exponents; use jones_sqrt_t")
        out[-e // 4] = coef
    return out
