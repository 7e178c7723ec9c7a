"""Second Conway coefficient a2 by skein recursion.

The Conway polynomial satisfies nabla(L+) - nabla(L-) = z nabla(L0) and
equals 1 on the unknot, 0 on split links.  Walking the diagram in
component order, the first crossing whose first visit runs under is
switched and smoothed; switching strictly advances the walk toward a
descending diagram, smoothing drops a crossing and a z-degree, so the
recursion bottoms out.  Everything is truncated at degree two, which is
all a2 needs, and intermediate results are memoized on canonical forms.
"""

from typing import Dict, Optional, Tuple

from .diagrams import PlanarDiagram, _collapse_runs, canonical_form
from .errors import DiagramError
from .laurent import Laurent, ladd, lscale

_Memo = Dict[Tuple[object, int], Laurent]


def _require_knot(d: PlanarDiagram) -> None:
    if d.vertices:
        raise DiagramError("diagram has graph vertices; not a knot")
    if len(d.components) != 1:
        raise DiagramError("diagram has %d components; not a knot" % len(d.components))


def _first_wrong(d: PlanarDiagram) -> Optional[int]:
    """First crossing whose first visit in the walk passes under."""
    t = d.trace
    seen = set()
    for comp in d.components:
        for a in comp:
            h = t.head.get(a)
            if h is None:
                continue
            _, j, s = h
            if j in seen:
                continue
            seen.add(j)
            if s % 2 == 0:
                return j
    return None


def switch_crossing(d: PlanarDiagram, i: int) -> PlanarDiagram:
    """Exchange over- and under-strand at crossing i."""
    x = d.crossings[i]
    if d.trace.signs[i] == 1:
        new = (x[3], x[0], x[1], x[2])
    else:
        new = (x[1], x[2], x[3], x[0])
    xs = d.crossings[:i] + (new,) + d.crossings[i + 1 :]
    return PlanarDiagram(xs, d.vertices, d.components, d.labels)


def oriented_smoothing(d: PlanarDiagram, i: int) -> PlanarDiagram:
    """Reconnect crossing i respecting orientation (the skein L0)."""
    x = d.crossings[i]
    sign = d.trace.signs[i]
    # flow enters at the in-slot and leaves at its partner
    partner = {0: 1, 3: 2} if sign == 1 else {0: 3, 1: 2}

    relabel: Dict[int, int] = {}
    for s_in, s_out in partner.items():
        if x[s_out] != x[s_in]:
            relabel[x[s_out]] = x[s_in]

    def rep(a: int) -> int:
        while a in relabel:
            a = relabel[a]
        return a

    t = d.trace
    succ: Dict[int, int] = {}
    for a in d.arcs:
        h = t.head.get(a)
        if h is None:
            continue
        _, j, s = h
        if j == i:
            succ[a] = x[partner[s]]
        else:
            succ[a] = d.crossings[j][(s + 2) % 4]

    comps = []
    seen = set()
    for comp in d.components:
        for a0 in comp:
            if a0 in seen or a0 not in succ:
                continue
            cycle = []
            a = a0
            while True:
                seen.add(a)
                cycle.append(rep(a))
                a = succ[a]
                if a == a0:
                    break
            comps.append(_collapse_runs(cycle))
        if len(comp) == 1 and comp[0] not in succ:
            comps.append(comp)  # free loop, untouched

    xs = tuple(
        tuple(rep(a) for a in xx)
        for j, xx in enumerate(d.crossings)
        if j != i
    )
    return PlanarDiagram(xs, d.vertices, tuple(comps))


def _conv(d: PlanarDiagram, m: int, memo: _Memo) -> Laurent:
    """Conway polynomial truncated to degree m."""
    if m < 0:
        return {}
    key = (canonical_form(d), m)
    cached = memo.get(key)
    if cached is not None:
        return cached
    wrong = _first_wrong(d)
    if wrong is None:
        out: Laurent = {0: 1} if len(d.components) == 1 else {}
    else:
        s = d.trace.signs[wrong]
        switched = _conv(switch_crossing(d, wrong), m, memo)
        smoothed = _conv(oriented_smoothing(d, wrong), m - 1, memo)
        out = ladd(switched, lscale(smoothed, s, 1))
    memo[key] = out
    return out


def conway_a2(d: PlanarDiagram, cap: int = 40) -> int:
    """Coefficient of z^2 in the Conway polynomial of a knot.

    Diagrams with more than ``cap`` crossings are rejected rather than
    risking an unbounded recursion; simplify first or raise the cap.
    """
    _require_knot(d)
    if len(d.crossings) > cap:
        raise DiagramError(
            "crossing count %d exceeds skein cap %d" % (len(d.crossings), cap)
        )
    bare = PlanarDiagram(d.crossings, d.vertices, d.components)
    nabla = _conv(bare, 2, {})
    if nabla.get(0) != 1:
        raise DiagramError("skein recursion lost the unit term")
    return nabla.get(2, 0)
