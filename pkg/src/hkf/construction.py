"""Constructive embeddings of complete graphs in the three-sphere.

The embedding Gamma_1 of K_n (n odd) lives in a solid torus presented as n
copies of one fundamental box glued in a ring.  Each box carries the same
planar tangle: an axis companion J along the top, a belt circle C pierced
once by every lane, and the edge strands of K_n.  Edges of step s (the
class of {j, j+s}) travel as a block of n+s-1 parallel lanes, shifting one
lane outward per box; one strand per class turns around at the box vertex,
entering on lane w_s and leaving at the top of its block.  Closing the
ring of n boxes yields Gamma_1: a spatial-graph diagram whose components
are J, the belts C_1..C_n, and one closed curve per edge class carrying
the n edges {j, j+s}.

For a cycle kappa of K_n the intersection with box W_i is a family of
spanning arcs k_i plus, when kappa visits the vertex v_i, a single arc e_i
through v_i.  Three shapes occur: form a (v_i not on kappa), form b (e_i
enters and leaves on the same side) and form c (e_i runs through).  The
associated link of (W_i, kappa) doubles the box across its gluing disk:
belt doubles Q1 Q2, gluing-disk cores j and b, the doubled vertex arc E,
meridian circles isolating the belt twist regions next to e_i, and the
core Y of the complementary solid torus.

Performing 1/q surgery on every framing curve is realized by q full
diagrammatic twists at the disks bounded by each belt C_i, by the axis,
and by the companion J.  The result is the re-embedded diagram Gamma_2.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from .diagrams import (
    AnnulusTangle,
    Crossing,
    Occ,
    PlanarDiagram,
    Strand,
    TwistSite,
    _collapse_runs,
    _resolve_deletion,
    add_meridian_loop,
    double_tangle,
    insert_full_twists_traced,
    normalize,
    restrict_to_components,
    validate,
)
from .errors import ConstructionError
from .graphs import Cycle, Edge, canonical_cycle

SURGERY_TARGETS = ("X1", "X2", "Z1", "Z2", "T1", "T2", "U1", "U2")

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ConstructionParams:
    """Construction data: n vertices, r framing twists, q surgery twists.

    n must be odd and at least 3.  r counts the full twists between
    consecutive vertex arcs inside each belt and must be positive.  q is
    the number of surgery twists applied at every framing disk; it may be
    zero or negative.
    """

    n: int
    r: int = 1
    q: int = 1

    def __post_init__(self) -> None:
        for name in ("n", "r", "q"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConstructionError("invalid-params: %s must be an integer" % name)
        if self.n < 3 or self.n % 2 == 0:
            raise ConstructionError("invalid-params: n must be odd and at least 3")
        if self.r < 1:
            raise ConstructionError("invalid-params: r must be at least 1")

    @property
    def classes(self) -> int:
        """Number of edge classes, (n - 1) / 2."""
        return (self.n - 1) // 2

    @property
    def strand_count(self) -> int:
        """Strands through each gluing disk: J, the blocks, and w_1..w_c."""
        n, c = self.n, self.classes
        return 1 + sum(n + s - 1 for s in range(1, c + 1)) + c


def _coerce_params(params) -> ConstructionParams:
    if isinstance(params, ConstructionParams):
        return params
    if isinstance(params, Mapping):
        return ConstructionParams(**params)
    raise ConstructionError("invalid-params: expected ConstructionParams")


# ---------------------------------------------------------------------------
# sweep engine
#
# A diagram is grown by moving a vertical line west to east.  The plugs are
# the strand ends currently crossing the line, top to bottom.  All events
# are local: swap two adjacent plugs (a crossing), open a cup, close a cap,
# or absorb a run of plugs into a graph vertex.  Each plug remembers its
# flow direction, so crossing tuples come out in the slot-0 under-incoming
# convention no matter how the strands are oriented.

_DIAG_INDEX = {(1, 1): 0, (-1, 1): 1, (-1, -1): 2, (1, -1): 3}


class _Plug:
    __slots__ = ("strand", "arc", "direction", "trail", "last_occ")

    def __init__(self, strand, arc: int, direction: int) -> None:
        self.strand = strand
        self.arc = arc
        self.direction = direction  # +1 flows east, -1 flows west
        self.trail: deque = deque((arc,))
        self.last_occ: Optional[Occ] = None

    def record(self, arc: int) -> None:
        if self.direction == 1:
            self.trail.append(arc)
        else:
            self.trail.appendleft(arc)
        self.arc = arc

    def flow_arcs(self) -> List[int]:
        """Arcs in flow order; west-moving plugs store them reversed."""
        return list(self.trail)


class _Sweep:
    def __init__(self, first_arc: int = 1) -> None:
        self._counter = itertools.count(first_arc)
        self.plugs: List[_Plug] = []
        self.crossings: List[Crossing] = []
        self.vertices: List[Tuple[int, ...]] = []
        self._merged: Dict[int, int] = {}

    def new_arc(self) -> int:
        return next(self._counter)

    @property
    def arc_max(self) -> int:
        c = next(self._counter)
        self._counter = itertools.chain([c], self._counter)  # peek
        return c - 1

    # -- union-find over cap merges ---------------------------------------

    def rep(self, a: int) -> int:
        seen = []
        while a in self._merged:
            seen.append(a)
            a = self._merged[a]
        for b in seen:
            self._merged[b] = a
        return a

    def _union(self, a: int, b: int) -> None:
        ra, rb = self.rep(a), self.rep(b)
        if ra != rb:
            keep, drop = (ra, rb) if ra < rb else (rb, ra)
            self._merged[drop] = keep

    # -- events ------------------------------------------------------------

    def enter(self, pos: int, strand, direction: int = 1) -> _Plug:
        p = _Plug(strand, self.new_arc(), direction)
        self.plugs.insert(pos, p)
        return p

    def cup(self, pos: int, upper_strand, lower_strand, upper_dir: int) -> Tuple[_Plug, _Plug]:
        arc = self.new_arc()
        up = _Plug(upper_strand, arc, upper_dir)
        dn = _Plug(lower_strand, arc, -upper_dir)
        self.plugs.insert(pos, dn)
        self.plugs.insert(pos, up)
        return up, dn

    def cap(self, pos: int) -> Tuple[_Plug, _Plug]:
        up, dn = self.plugs[pos], self.plugs[pos + 1]
        if up.direction == dn.direction:
            raise ConstructionError("invalid-composition: cap on parallel plugs")
        self._union(up.arc, dn.arc)
        del self.plugs[pos : pos + 2]
        return up, dn

    def swap(self, pos: int, over: str) -> int:
        """Cross plugs pos and pos+1; over names the strand on top."""
        up, dn = self.plugs[pos], self.plugs[pos + 1]
        fresh = {id(up): self.new_arc(), id(dn): self.new_arc()}
        v_up = (1, -1) if up.direction == 1 else (-1, 1)
        v_dn = (1, 1) if dn.direction == 1 else (-1, -1)
        if over == "upper":
            under, v_u, over_p, v_o = dn, v_dn, up, v_up
        else:
            under, v_u, over_p, v_o = up, v_up, dn, v_dn
        rays: Dict[int, Tuple[int, _Plug, bool]] = {}
        for plug, v in ((under, v_u), (over_p, v_o)):
            f = fresh[id(plug)]
            inc, out = (plug.arc, f) if plug.direction == 1 else (f, plug.arc)
            rays[_DIAG_INDEX[(-v[0], -v[1])]] = (inc, plug, inc == f)
            rays[_DIAG_INDEX[v]] = (out, plug, out == f)
        base = _DIAG_INDEX[(-v_u[0], -v_u[1])]
        tup = tuple(rays[(base + k) % 4][0] for k in range(4))
        idx = len(self.crossings)
        self.crossings.append(tup)
        for k in range(4):
            arc, plug, is_fresh = rays[(base + k) % 4]
            if is_fresh:
                plug.last_occ = ("x", idx, k)
        for plug in (up, dn):
            plug.record(fresh[id(plug)])
        self.plugs[pos], self.plugs[pos + 1] = dn, up
        return idx

    def vertex(self, pos: int, count: int) -> List[_Plug]:
        consumed = self.plugs[pos : pos + count]
        self.vertices.append(tuple(p.arc for p in consumed))
        del self.plugs[pos : pos + count]
        return consumed

    def index(self, plug: _Plug) -> int:
        for i, p in enumerate(self.plugs):
            if p is plug:
                return i
        raise ConstructionError("invalid-composition: plug left the boundary")


@dataclass
class _BeltData:
    pierce_plugs: List[_Plug]
    pierce_arcs: List[int]
    pierce_occs: List[Occ]
    spots: Dict[str, Tuple[Tuple[int, int], Tuple[Occ, Occ]]]
    ring_seqs: Dict[str, List[int]]
    loop_seq: List[int]


def _run_belt(sw: _Sweep, loop_strand, schedule: Sequence[Tuple]) -> _BeltData:
    """Descend a two-rail cable from above plug 0 to the bottom and close it.

    Schedule items: ("lane", plug) passes one lane, under the first rail
    and over the second; ("joint", m) inserts m half twists of the cable;
    ("ring", label) wraps a small circle around the cable; ("spot", sid)
    records a twist site on the two rail arcs at the current height.
    """
    up, dn = sw.cup(0, loop_strand, loop_strand, upper_dir=-1)
    data = _BeltData([], [], [], {}, {}, [])
    p = 0  # index of the upper rail
    for item in schedule:
        kind = item[0]
        if kind == "lane":
            lane = item[1]
            sw.swap(p + 1, "lower")
            sw.swap(p, "upper")
            p += 1
            data.pierce_plugs.append(lane)
            data.pierce_arcs.append(lane.arc)
            data.pierce_occs.append(lane.last_occ)
        elif kind == "joint":
            for _ in range(item[1]):
                sw.swap(p, "upper")
        elif kind == "ring":
            r_top, r_mid = sw.cup(p, item[1], item[1], upper_dir=-1)
            sw.swap(p + 1, "lower")
            sw.swap(p + 2, "lower")
            sw.swap(p, "upper")
            sw.swap(p + 1, "upper")
            sw.cap(p + 2)
            data.ring_seqs[item[1]] = r_mid.flow_arcs() + r_top.flow_arcs()
        elif kind == "spot":
            rail_u, rail_l = sw.plugs[p], sw.plugs[p + 1]
            data.spots[item[1]] = (
                (rail_u.arc, rail_l.arc),
                (rail_u.last_occ, rail_l.last_occ),
            )
        else:
            raise ConstructionError("invalid-composition: bad belt item %r" % (item,))
    lower = sw.plugs[p + 1] if sw.plugs[p].direction == -1 else sw.plugs[p]
    sw.cap(p)
    seq = (dn.flow_arcs() if dn is not lower else lower.flow_arcs()) + up.flow_arcs()
    data.loop_seq = dn.flow_arcs() + up.flow_arcs()
    return data


# ---------------------------------------------------------------------------
# the fundamental box


@dataclass
class _Box:
    crossings: List[Crossing]
    vertex: Tuple[int, ...]
    vertex_legs: Dict[int, Tuple[int, int]]
    entry: List[Tuple[tuple, int]]
    exit: List[Tuple[tuple, int]]
    trails: Dict[tuple, Tuple[int, ...]]
    loop: Tuple[int, ...]
    site_arcs: Tuple[int, ...]
    site_occs: Tuple[Occ, ...]
    arc_max: int


def _build_box(params: ConstructionParams) -> _Box:
    n, r, c = params.n, params.r, params.classes
    sw = _Sweep()

    jp = sw.enter(len(sw.plugs), ("J",))
    blk: Dict[int, Dict[int, _Plug]] = {}
    for s in range(1, c + 1):
        blk[s] = {}
        for lane in range(1, n + s):
            blk[s][lane] = sw.enter(len(sw.plugs), ("blk", s, lane))
    inp: Dict[int, _Plug] = {}
    for s in range(1, c + 1):
        inp[s] = sw.enter(len(sw.plugs), ("in", s))
    entry = [(p.strand, p.arc) for p in sw.plugs]

    # turnaround of each class: the carrier cups off lane w_s and climbs to
    # the top of its own block, crossing everything on the way over
    asc: Dict[int, _Plug] = {}
    outp: Dict[int, _Plug] = {}
    for s in range(c, 0, -1):
        pos = sw.index(inp[s]) + 1
        a, o = sw.cup(pos, ("out", s), ("out", s), upper_dir=1)
        asc[s], outp[s] = a, o
        ceiling = jp if s == 1 else blk[s - 1][n + s - 2]
        while sw.plugs[sw.index(a) - 1] is not ceiling:
            sw.swap(sw.index(a) - 1, "lower")

    # the belt crosses every lane once, with half twists after J and after
    # the last block, and r full twists between consecutive carrier pairs
    schedule: List[Tuple] = []
    last_block = blk[c][n + c - 1]
    for p in list(sw.plugs):
        schedule.append(("lane", p))
        if p is jp or p is last_block:
            schedule.append(("joint", 1))
        elif p.strand[0] == "out" and p.strand[1] < c and p.direction == -1:
            schedule.append(("joint", 2 * r))
    belt = _run_belt(sw, ("C",), schedule)

    # east of the belt each carrier pair claps shut onto the vertex stack
    for s in range(1, c + 1):
        for _ in range(2 * (c - s) + 1):
            sw.swap(sw.index(inp[s]), "upper")
        for _ in range(2 * (c - s)):
            sw.swap(sw.index(outp[s]), "upper")

    top = sw.index(outp[c])
    consumed = sw.vertex(top, 2 * c)
    expect: List[_Plug] = []
    for s in range(c, 0, -1):
        expect += [outp[s], inp[s]]
    if [id(p) for p in consumed] != [id(p) for p in expect]:
        raise ConstructionError("invalid-composition: vertex stack out of order")
    vertex_legs = {s: (inp[s].arc, outp[s].arc) for s in range(1, c + 1)}

    # lane shift: the bottom lane of each block descends to slot w_s
    settled: List[int] = []
    for s in range(c, 0, -1):
        mover = blk[s][n + s - 1]
        while True:
            i = sw.index(mover)
            if i + 1 >= len(sw.plugs) or id(sw.plugs[i + 1]) in settled:
                break
            sw.swap(i, "upper")
        settled.append(id(mover))

    exit_slots = [(p.strand, p.arc) for p in sw.plugs]
    if len(exit_slots) != len(entry):
        raise ConstructionError("invalid-composition: boundary mismatch")

    rep = sw.rep

    def fix(seq) -> Tuple[int, ...]:
        return tuple(rep(a) for a in seq)

    trails: Dict[tuple, Tuple[int, ...]] = {("J",): fix(jp.flow_arcs())}
    for s in range(1, c + 1):
        trails[("in", s)] = fix(inp[s].flow_arcs())
        trails[("out", s)] = _collapse_runs(
            [rep(a) for a in outp[s].flow_arcs() + asc[s].flow_arcs()]
        )
        for lane in range(1, n + s):
            trails[("blk", s, lane)] = fix(blk[s][lane].flow_arcs())

    return _Box(
        crossings=[tuple(rep(a) for a in x) for x in sw.crossings],
        vertex=fix(sw.vertices[0]),
        vertex_legs={s: (rep(i_), rep(o_)) for s, (i_, o_) in vertex_legs.items()},
        entry=[(k, rep(a)) for k, a in entry],
        exit=[(k, rep(a)) for k, a in exit_slots],
        trails=trails,
        loop=_collapse_runs([rep(a) for a in belt.loop_seq]),
        site_arcs=fix(belt.pierce_arcs),
        site_occs=tuple(belt.pierce_occs),
        arc_max=sw.arc_max,
    )


def _shift_box(box: _Box, arc_off: int, x_off: int) -> _Box:
    def sh(a: int) -> int:
        return a + arc_off

    def sho(o: Occ) -> Occ:
        return (o[0], o[1] + x_off, o[2])

    return _Box(
        crossings=[tuple(sh(a) for a in x) for x in box.crossings],
        vertex=tuple(sh(a) for a in box.vertex),
        vertex_legs={s: (sh(i), sh(o)) for s, (i, o) in box.vertex_legs.items()},
        entry=[(k, sh(a)) for k, a in box.entry],
        exit=[(k, sh(a)) for k, a in box.exit],
        trails={k: tuple(sh(a) for a in t) for k, t in box.trails.items()},
        loop=tuple(sh(a) for a in box.loop),
        site_arcs=tuple(sh(a) for a in box.site_arcs),
        site_occs=tuple(sho(o) for o in box.site_occs),
        arc_max=box.arc_max + arc_off,
    )


# ---------------------------------------------------------------------------
# quotient tangle and the lifted embedding


def _key_strand_name(key: tuple) -> str:
    if key[0] == "J":
        return "J"
    if key[0] in ("in", "out"):
        return "S%dv" % key[1]
    return "S%dk%d" % (key[1], key[2])


def build_quotient_tangle(params) -> AnnulusTangle:
    """The fundamental box as an annulus tangle.

    Strands are named J, S{s}v for the carrier through the vertex, and
    S{s}k{lane} for the block lanes.  The belt is the single loop C, and
    the one twist site C records the belt disk, pierced by every lane.
    """
    params = _coerce_params(params)
    box = _build_box(params)
    n, c = params.n, params.classes
    strands: List[Strand] = [Strand("J", box.trails[("J",)])]
    for s in range(1, c + 1):
        carrier = _collapse_runs(list(box.trails[("in", s)] + box.trails[("out", s)]))
        strands.append(Strand("S%dv" % s, carrier))
        for lane in range(1, n + s):
            strands.append(Strand("S%dk%d" % (s, lane), box.trails[("blk", s, lane)]))
    left = tuple((_key_strand_name(k), a) for k, a in box.entry)
    right = tuple((_key_strand_name(k), a) for k, a in box.exit)
    site = TwistSite("C", box.site_arcs, box.site_occs)
    return AnnulusTangle(
        crossings=tuple(box.crossings),
        vertices=(box.vertex,),
        strands=tuple(strands),
        loops=(box.loop,),
        loop_labels=("C",),
        left_ends=left,
        right_ends=right,
        twist_sites=(site,),
    )


@dataclass(frozen=True)
class Transit:
    """One passage of an edge through one box."""

    annulus: int
    kind: str  # "out", "block", "in"
    lane: int
    arcs: Tuple[int, ...]


@dataclass(frozen=True)
class EdgeRecord:
    tail: int
    head: int
    step: int
    transits: Tuple[Transit, ...]

    @property
    def arcs(self) -> FrozenSet[int]:
        out: Set[int] = set()
        for t in self.transits:
            out.update(t.arcs)
        return frozenset(out)


@dataclass(frozen=True)
class LiftedEmbedding:
    """Gamma_1 with its construction metadata.

    diagram is the closed n-fold lift.  c_sites hold one twist site per
    belt disk; seam_arcs and seam_entries describe the strands through the
    closing gluing disk, which carries the axis and companion disks.
    edges maps each K_n edge to its strand data.
    """

    diagram: PlanarDiagram
    params: ConstructionParams
    c_sites: Tuple[TwistSite, ...]
    seam_arcs: Tuple[int, ...]
    seam_entries: Tuple[Occ, ...]
    vertex_ids: Tuple[int, ...]
    edges: Mapping[Edge, EdgeRecord]
    quotient: AnnulusTangle


def _assemble_ring(params: ConstructionParams, copies: int):
    """Glue `copies` boxes in a ring; returns the diagram and walk data."""
    n, c = params.n, params.classes
    box0 = _build_box(params)
    stride = box0.arc_max
    nx = len(box0.crossings)
    boxes = [_shift_box(box0, k * stride, k * nx) for k in range(copies)]

    merged: Dict[int, int] = {}

    def rep(a: int) -> int:
        seen = []
        while a in merged:
            seen.append(a)
            a = merged[a]
        for b in seen:
            merged[b] = a
        return a

    def union(a: int, b: int) -> None:
        ra, rb = rep(a), rep(b)
        if ra != rb:
            keep, drop = (ra, rb) if ra < rb else (rb, ra)
            merged[drop] = keep

    for k in range(copies):
        nb = boxes[(k + 1) % copies]
        for (_, a_out), (_, a_in) in zip(boxes[k].exit, nb.entry):
            union(a_out, a_in)

    def fix(seq) -> Tuple[int, ...]:
        return tuple(rep(a) for a in seq)

    crossings: List[Crossing] = []
    for b in boxes:
        crossings.extend(tuple(rep(a) for a in x) for x in b.crossings)
    vertices = [fix(b.vertex) for b in boxes]
    trails = [{k: fix(t) for k, t in b.trails.items()} for b in boxes]

    entry_keys = [k for k, _ in box0.entry]
    exit_slot_of = {k: i for i, (k, _) in enumerate(box0.exit)}
    w_slot = {s: entry_keys.index(("in", s)) for s in range(1, c + 1)}

    comps: List[Tuple[int, ...]] = []
    labels: List[str] = []

    j_seq: List[int] = []
    for k in range(copies):
        j_seq.extend(trails[k][("J",)])
    comps.append(_collapse_runs(j_seq))
    labels.append("J")

    # walk each edge class around the ring; the event list drives both the
    # component arcs and the per-edge transit records
    class_events: Dict[int, List[List[Tuple[int, tuple]]]] = {}
    for s in range(1, c + 1):
        class_events[s] = []
        seen: Set[Tuple[int, int]] = set()
        for k0 in range(copies):
            state = (k0, w_slot[s])
            if state in seen:
                continue
            events: List[Tuple[int, tuple]] = []
            while True:
                seen.add(state)
                k, slot = state
                key = entry_keys[slot]
                events.append((k, key))
                if key[0] == "in":
                    nxt = exit_slot_of[("out", key[1])]
                else:
                    nxt = exit_slot_of[key]
                state = ((k + 1) % copies, nxt)
                if state == (k0, w_slot[s]):
                    break
            class_events[s].append(events)

    for s in range(1, c + 1):
        runs = class_events[s]
        for idx, events in enumerate(runs):
            seq: List[int] = []
            for k, key in events:
                if key[0] == "in":
                    seq.extend(trails[k][("in", key[1])])
                    seq.extend(trails[k][("out", key[1])])
                else:
                    seq.extend(trails[k][key])
            comps.append(_collapse_runs(seq))
            suffix = "" if len(runs) == 1 else _LETTERS[idx]
            labels.append("S%d%s" % (s, suffix))

    for k in range(copies):
        comps.append(tuple(rep(a) for a in boxes[k].loop))
        labels.append("C%d" % (k + 1))

    d = PlanarDiagram(tuple(crossings), tuple(vertices), tuple(comps), tuple(labels))

    c_sites = tuple(
        TwistSite("C%d" % (k + 1), fix(boxes[k].site_arcs), boxes[k].site_occs)
        for k in range(copies)
    )
    seam_arcs = fix(a for _, a in boxes[0].entry)
    return d, boxes, trails, class_events, c_sites, seam_arcs, nx


def close_quotient(tangle: AnnulusTangle, params) -> PlanarDiagram:
    """Close the quotient tangle onto itself, giving the downstairs link."""
    params = _coerce_params(params)
    if tangle != build_quotient_tangle(params):
        raise ConstructionError("invalid-composition: tangle does not match params")
    d, *_ = _assemble_ring(params, 1)
    return d


def lift_and_close(tangle: AnnulusTangle, params) -> LiftedEmbedding:
    """Close n copies of the quotient tangle into the embedding Gamma_1."""
    params = _coerce_params(params)
    if tangle != build_quotient_tangle(params):
        raise ConstructionError("invalid-composition: tangle does not match params")
    n = params.n
    d, boxes, trails, class_events, c_sites, seam_arcs, nx = _assemble_ring(params, n)

    problems = validate(d)
    if problems:
        raise ConstructionError("invalid-composition: " + "; ".join(problems))

    # per-edge transit records: each walk visits the vertices of its cycle,
    # and the stretch between consecutive vertex passages is one edge
    edges: Dict[Edge, EdgeRecord] = {}
    for s, runs in class_events.items():
        for events in runs:
            in_pos = [i for i, (_, key) in enumerate(events) if key[0] == "in"]
            m = len(events)
            for a_i, b_i in zip(in_pos, in_pos[1:] + [in_pos[0]]):
                tail_box = events[a_i][0]
                head_box = events[b_i][0]
                tail, head = tail_box + 1, head_box + 1
                transits: List[Transit] = []
                transits.append(
                    Transit(tail, "out", 0, trails[tail_box][("out", s)])
                )
                i = (a_i + 1) % m
                while i != b_i:
                    k, key = events[i]
                    transits.append(Transit(k + 1, "block", key[2], trails[k][key]))
                    i = (i + 1) % m
                transits.append(Transit(head, "in", 0, trails[head_box][("in", s)]))
                key_e = (min(tail, head), max(tail, head))
                edges[key_e] = EdgeRecord(tail, head, s, tuple(transits))

    if len(edges) != n * params.classes:
        raise ConstructionError("invalid-composition: edge walk incomplete")

    seam_entries = []
    occ = d.occurrences
    for a in seam_arcs:
        inside = [o for o in occ[a] if o[0] == "x" and o[1] < nx]
        if len(inside) != 1:
            raise ConstructionError("invalid-composition: seam arc %d" % a)
        seam_entries.append(inside[0])

    return LiftedEmbedding(
        diagram=d,
        params=params,
        c_sites=c_sites,
        seam_arcs=seam_arcs,
        seam_entries=tuple(seam_entries),
        vertex_ids=tuple(range(n)),
        edges=edges,
        quotient=tangle,
    )


def build_embedding(params) -> LiftedEmbedding:
    """Convenience: quotient tangle plus lift in one call."""
    params = _coerce_params(params)
    return lift_and_close(build_quotient_tangle(params), params)


# ---------------------------------------------------------------------------
# cycle decomposition


@dataclass(frozen=True)
class AnnulusData:
    """kappa seen inside one box: spanning arcs, the vertex arc, its form."""

    annulus: int
    form: str
    k_arcs: Tuple[Tuple[int, ...], ...]
    e_arc: Tuple[int, ...]
    multiples: Mapping[str, int]


@dataclass(frozen=True)
class CycleDecomposition:
    cycle: Cycle
    per_annulus: Tuple[AnnulusData, ...]
    twist_multiples: Mapping[str, int]


def _check_cycle(kappa, n: int) -> Cycle:
    try:
        verts = tuple(int(v) for v in kappa)
    except (TypeError, ValueError):
        raise ConstructionError("unknown-cycle: %r" % (kappa,)) from None
    if len(verts) < 3 or len(set(verts)) != len(verts):
        raise ConstructionError("unknown-cycle: %r is not a simple cycle" % (kappa,))
    if any(v < 1 or v > n for v in verts):
        raise ConstructionError("unknown-cycle: %r has vertices outside K_%d" % (kappa, n))
    return canonical_cycle(verts)


def decompose_cycle(gamma1: LiftedEmbedding, kappa, params=None) -> CycleDecomposition:
    """Cut a cycle of K_n into its per-annulus arcs and classify each box.

    In box W_i the cycle leaves the spanning arcs k_i (block transits) and,
    when v_i lies on the cycle, the arc e_i through the vertex.  The form is
    a when v_i is not visited, b when e_i turns back to the gluing disk it
    came from, and c when it runs through the box.  The twist multiples are
    the numbers of full belt twists isolated next to the two e_i piercings:
    (s_min - 1) r above the first and (s_max - s_min) r between them, for
    incident edge steps s_min <= s_max.
    """
    if not isinstance(gamma1, LiftedEmbedding):
        raise ConstructionError("invalid-input: expected a lifted embedding")
    if params is not None and _coerce_params(params) != gamma1.params:
        raise ConstructionError("invalid-params: parameters do not match the embedding")
    p = gamma1.params
    kap = _check_cycle(kappa, p.n)
    m = len(kap)
    edges_along = [(kap[i], kap[(i + 1) % m]) for i in range(m)]
    records = [gamma1.edges[(min(u, v), max(u, v))] for u, v in edges_along]
    on_cycle = set(kap)

    per: List[AnnulusData] = []
    flat: Dict[str, int] = {}
    for i in range(1, p.n + 1):
        k_arcs = [
            t.arcs for rec in records for t in rec.transits
            if t.annulus == i and t.kind == "block"
        ]
        if i not in on_cycle:
            per.append(AnnulusData(i, "a", tuple(k_arcs), (), {}))
            continue
        pos = kap.index(i)
        rec_in = records[(pos - 1) % m]  # edge travelled into v_i
        rec_out = records[pos]  # edge travelled out of v_i
        arrive_in = rec_in.head == i
        arrive_out = rec_out.head == i
        if arrive_in == arrive_out:
            form = "b"
            inner_lab, outer_lab = "x", "z"
        else:
            form = "c"
            inner_lab, outer_lab = "t", "u"
        s1, s2 = sorted((rec_in.step, rec_out.step))
        multiples = {inner_lab: (s1 - 1) * p.r, outer_lab: (s2 - s1) * p.r}

        def half(rec) -> Transit:
            for t in rec.transits:
                if t.annulus == i and t.kind in ("in", "out"):
                    return t
            raise ConstructionError("invalid-composition: missing vertex transit")

        t_in, t_out = half(rec_in), half(rec_out)
        seg1 = t_in.arcs if rec_in.head == i else tuple(reversed(t_in.arcs))
        seg2 = t_out.arcs if rec_out.tail == i else tuple(reversed(t_out.arcs))
        e_arc = seg1 + seg2
        per.append(AnnulusData(i, form, tuple(k_arcs), e_arc, multiples))
        for lab, val in multiples.items():
            flat["W%d:%s" % (i, lab)] = val

    return CycleDecomposition(kap, tuple(per), flat)


# ---------------------------------------------------------------------------
# associated links


@dataclass(frozen=True)
class LinkForm:
    """The associated link of one annulus: a labeled diagram plus the spot
    sites where surgery twists may replace the meridian circles."""

    variant: str
    diagram: PlanarDiagram
    sites: Mapping[str, TwistSite]
    annulus: int = 0
    multiples: Mapping[str, int] = field(default_factory=dict)


def _template_tangle(variant: str, with_circles: bool = True) -> AnnulusTangle:
    sw = _Sweep()
    loops: List[Tuple[int, ...]] = []
    loop_labels: List[str] = []
    sites: List[TwistSite] = []

    if variant == "a":
        jp = sw.enter(0, "j")
        bp = sw.enter(1, "b")
        schedule = [("lane", jp), ("joint", 1), ("lane", bp)]
        spot_ids: Tuple[str, ...] = ()
    elif variant == "b":
        jp = sw.enter(0, "j")
        bp = sw.enter(1, "b")
        la = sw.enter(2, "E")
        lb = sw.enter(3, "E", direction=-1)
        schedule = [("lane", jp), ("joint", 1), ("lane", bp), ("joint", 1)]
        if with_circles:
            schedule.append(("ring", "X"))
        schedule += [("spot", "X"), ("lane", la)]
        if with_circles:
            schedule.append(("ring", "Z"))
        schedule += [("spot", "Z"), ("lane", lb)]
        spot_ids = ("X", "Z")
    elif variant == "c":
        jp = sw.enter(0, "j")
        bp = sw.enter(1, "b")
        ip = sw.enter(2, "E")
        ap, op = sw.cup(3, "E", "E", upper_dir=1)
        while sw.plugs[sw.index(ap) - 1] is not jp:
            sw.swap(sw.index(ap) - 1, "lower")
        schedule = [
            ("lane", jp),
            ("joint", 1),
            ("lane", ap),
            ("lane", bp),
            ("joint", 1),
        ]
        if with_circles:
            schedule.append(("ring", "T"))
        schedule += [("spot", "T"), ("lane", ip)]
        if with_circles:
            schedule.append(("ring", "U"))
        schedule += [("spot", "U"), ("lane", op)]
        spot_ids = ("T", "U")
    else:
        raise ConstructionError("invalid-input: unknown form %r" % variant)

    belt = _run_belt(sw, "Q", schedule)

    rep = sw.rep
    if variant == "b":
        sw.cap(sw.index(la))
    elif variant == "c":
        sw.cap(sw.index(ip))

    def fix(seq) -> Tuple[int, ...]:
        return _collapse_runs([rep(a) for a in seq])

    strands = [Strand("j", fix(jp.flow_arcs())), Strand("b", fix(bp.flow_arcs()))]
    if variant == "b":
        strands.append(Strand("E", fix(la.flow_arcs() + lb.flow_arcs())))
        left = (
            ("j", jp.trail[0]),
            ("b", bp.trail[0]),
            ("E", la.trail[0]),
            ("E", lb.trail[-1]),
        )
        right = (("j", rep(jp.arc)), ("b", rep(bp.arc)))
    elif variant == "c":
        strands.append(
            Strand("E", fix(ip.flow_arcs() + op.flow_arcs() + ap.flow_arcs()))
        )
        left = (("j", jp.trail[0]), ("b", bp.trail[0]), ("E", ip.trail[0]))
        right = (("j", rep(jp.arc)), ("E", rep(ap.arc)), ("b", rep(bp.arc)))
    else:
        left = (("j", jp.trail[0]), ("b", bp.trail[0]))
        right = (("j", rep(jp.arc)), ("b", rep(bp.arc)))

    loops.append(fix(belt.loop_seq))
    loop_labels.append("Q")
    if with_circles:
        for sid in spot_ids:
            loops.append(fix(belt.ring_seqs[sid]))
            loop_labels.append(sid)
    for sid in spot_ids:
        arcs, occs = belt.spots[sid]
        sites.append(TwistSite("spot" + sid, tuple(rep(a) for a in arcs), occs))

    return AnnulusTangle(
        crossings=tuple(tuple(rep(a) for a in x) for x in sw.crossings),
        vertices=(),
        strands=tuple(strands),
        loops=tuple(loops),
        loop_labels=tuple(loop_labels),
        left_ends=left,
        right_ends=right,
        twist_sites=tuple(sites),
    )


def _fix_occ(d: PlanarDiagram, occ: Occ, arc: int) -> Occ:
    """Repair an occurrence whose crossing tuple was rotated by normalize."""
    kind, i, s = occ
    row = d.crossings[i] if kind == "x" else d.vertices[i]
    if row[s] == arc:
        return occ
    if kind == "x" and row[(s + 2) % 4] == arc:
        return (kind, i, (s + 2) % 4)
    raise ConstructionError("invalid-composition: lost occurrence of arc %d" % arc)


def _assemble_link(variant: str, with_circles: bool = True):
    t = _template_tangle(variant, with_circles)
    dt = double_tangle(t)
    d = dt.diagram

    # the complementary core Y: a meridian ring around the strands through
    # the right-hand gluing disk
    nx = len(t.crossings)
    entries = []
    for a in dt.glue_arcs_right:
        inside = [o for o in d.occurrences[a] if o[0] == "x" and o[1] < nx]
        if len(inside) != 1:
            raise ConstructionError("invalid-composition: gluing arc %d" % a)
        entries.append(inside[0])
    seam = TwistSite("seam", dt.glue_arcs_right, tuple(entries))
    d = add_meridian_loop(d, seam, "Y")

    sites: Dict[str, TwistSite] = {}
    for sid, site in dt.sites.items():
        label = sid[4:]  # spotX1 -> X1
        sites[label] = TwistSite(
            label,
            site.strand_arcs,
            tuple(
                _fix_occ(d, e, a) for a, e in zip(site.strand_arcs, site.entry_ends)
            ),
            site.handedness,
        )
    return d, sites


def build_link_L(decomp: CycleDecomposition, i: int, params=None) -> LinkForm:
    """The associated link of annulus i for a decomposed cycle.

    The diagram is the canonical picture of the form: doubled belt Q1 Q2,
    gluing-disk cores j and b, the doubled vertex arc E for forms b and c,
    the meridian circles X/Z or T/U isolating the belt twist regions, and
    the complementary core Y.
    """
    if not isinstance(decomp, CycleDecomposition):
        raise ConstructionError("invalid-input: expected a cycle decomposition")
    if params is not None:
        p = _coerce_params(params)
        if len(decomp.per_annulus) != p.n:
            raise ConstructionError("invalid-params: parameters do not match the cycle")
    if not 1 <= i <= len(decomp.per_annulus):
        raise ConstructionError("invalid-input: annulus %r out of range" % (i,))
    data = decomp.per_annulus[i - 1]
    d, sites = _assemble_link(data.form, with_circles=True)
    return LinkForm(data.form, d, sites, annulus=i, multiples=dict(data.multiples))


def link_template(variant: str) -> LinkForm:
    """The generic associated link of one form, independent of any cycle."""
    d, sites = _assemble_link(variant, with_circles=True)
    return LinkForm(variant, d, sites)


# ---------------------------------------------------------------------------
# surgery on the associated link


def apply_surgery_twists(link: LinkForm, slopes: Mapping[str, int]) -> PlanarDiagram:
    """Trade meridian circles for twist regions: 1/m surgery on each circle.

    Every key must name one of the link's meridian circles X1..U2; the
    keyed circle is removed and m full twists are inserted across the two
    belt rails at its spot.  Circles left unkeyed stay in the diagram.
    """
    if not isinstance(link, LinkForm):
        raise ConstructionError("invalid-input: expected a LinkForm")
    for key in slopes:
        if key not in SURGERY_TARGETS:
            raise ConstructionError("invalid-surgery-target: %r" % (key,))
        if key not in link.sites or key not in link.diagram.labels:
            raise ConstructionError(
                "invalid-surgery-target: %r is not a circle of this link" % (key,)
            )
    d = link.diagram
    for key in sorted(slopes):
        site = link.sites[key]
        fixed = TwistSite(
            site.site_id,
            site.strand_arcs,
            tuple(
                _fix_occ(d, e, a)
                for a, e in zip(site.strand_arcs, site.entry_ends)
            ),
            site.handedness,
        )
        d, _ = insert_full_twists_traced(d, fixed, slopes[key])
    keep = [lab for lab in d.labels if lab not in slopes]
    return restrict_to_components(d, keep)


def twisted_link_direct(variant: str, slopes: Mapping[str, int]) -> PlanarDiagram:
    """The associated link built with twist regions in place of the circles.

    Every meridian circle of the form must be keyed.  The template is laid
    out without any circles and the twists are inserted straight into the
    spots, so this is an independent comparison target for
    apply_surgery_twists with the same slopes.
    """
    d, sites = _assemble_link(variant, with_circles=False)
    if set(slopes) != set(sites):
        raise ConstructionError(
            "invalid-surgery-target: direct build needs slopes for %s"
            % sorted(sites)
        )
    for key in sorted(slopes):
        site = sites[key]
        fixed = TwistSite(
            site.site_id,
            site.strand_arcs,
            tuple(
                _fix_occ(d, e, a)
                for a, e in zip(site.strand_arcs, site.entry_ends)
            ),
            site.handedness,
        )
        d, _ = insert_full_twists_traced(d, fixed, slopes[key])
    return d


# ---------------------------------------------------------------------------
# the twisted re-embedding


@dataclass(frozen=True)
class TwistedEmbedding:
    """Gamma_2: the re-embedded diagram after q twists at every framing disk."""

    diagram: PlanarDiagram
    params: ConstructionParams
    edge_arcs: Mapping[Edge, FrozenSet[int]]
    base: LiftedEmbedding


def assemble_gamma2(gamma1: LiftedEmbedding, params=None) -> TwistedEmbedding:
    """Insert q full twists at the n belt disks, the axis disk, and the
    companion disk of J.

    With q = 0 the diagram is returned unchanged, bit for bit.  The twist
    order is C_1..C_n, then the axis (all strands through the closing
    gluing disk), then J's disk (the same strands except J itself).
    """
    if not isinstance(gamma1, LiftedEmbedding):
        raise ConstructionError("invalid-input: expected a lifted embedding")
    if params is not None and _coerce_params(params) != gamma1.params:
        raise ConstructionError("invalid-params: parameters do not match the embedding")
    p = gamma1.params
    q = p.q

    owner: Dict[int, Edge] = {}
    edge_sets: Dict[Edge, Set[int]] = {}
    for e, rec in gamma1.edges.items():
        s = set(rec.arcs)
        edge_sets[e] = s
        for a in s:
            owner[a] = e

    if q == 0:
        return TwistedEmbedding(
            gamma1.diagram,
            p,
            {e: frozenset(s) for e, s in edge_sets.items()},
            gamma1,
        )

    d = gamma1.diagram

    def absorb(pieces: Mapping[int, Tuple[int, ...]]) -> None:
        for a, ps in pieces.items():
            e = owner.get(a)
            if e is None:
                continue
            edge_sets[e].update(ps)
            for b in ps:
                owner[b] = e

    def refreshed(site: TwistSite) -> TwistSite:
        return TwistSite(
            site.site_id,
            site.strand_arcs,
            tuple(
                _fix_occ(d, e, a)
                for a, e in zip(site.strand_arcs, site.entry_ends)
            ),
            site.handedness,
        )

    seam_current = dict(zip(gamma1.seam_arcs, gamma1.seam_arcs))

    for site in gamma1.c_sites:
        d, pieces = insert_full_twists_traced(d, refreshed(site), q)
        absorb(pieces)
        for orig, cur in list(seam_current.items()):
            if cur in pieces:
                seam_current[orig] = pieces[cur][-1]

    # the axis block goes into the clean strip just west of the seam; each
    # strand's entry is therefore its upstream occurrence, found as the end
    # opposite the stable first crossing inside box 1
    v_arcs = []
    v_entries = []
    for orig, entry in zip(gamma1.seam_arcs, gamma1.seam_entries):
        cur = seam_current[orig]
        east = _fix_occ(d, entry, cur)
        o1, o2 = d.occurrences[cur]
        v_arcs.append(cur)
        v_entries.append(o2 if o1 == east else o1)
    v_site = TwistSite("V", tuple(v_arcs), tuple(v_entries))
    base_count = len(d.crossings)
    d, pieces = insert_full_twists_traced(d, v_site, q)
    absorb(pieces)

    # J's own disk carries every seam strand except J itself; its twist
    # block lands between the axis block and box 1
    j_arcs = []
    j_entries = []
    for orig, cur in list(zip(gamma1.seam_arcs, v_arcs))[1:]:
        east = pieces.get(cur, (cur,))[-1]
        occs = [o for o in d.occurrences[east] if o[0] == "x" and o[1] >= base_count]
        if len(occs) != 1:
            raise ConstructionError("invalid-composition: seam strand %d" % orig)
        j_arcs.append(east)
        j_entries.append(occs[0])
    j_site = TwistSite("Jdisk", tuple(j_arcs), tuple(j_entries))
    d, pieces = insert_full_twists_traced(d, j_site, q)
    absorb(pieces)

    return TwistedEmbedding(
        d, p, {e: frozenset(s) for e, s in edge_sets.items()}, gamma1
    )


# ---------------------------------------------------------------------------
# extraction of cycle knots


def _trace_single_component(
    crossings: Sequence[Crossing], fallback_arc: int
) -> Tuple[int, ...]:
    occ2: Dict[int, List[Tuple[int, int]]] = {}
    for i, x in enumerate(crossings):
        for s, a in enumerate(x):
            occ2.setdefault(a, []).append((i, s))
    if not occ2:
        return (fallback_arc,)
    start = min(occ2)
    comp: List[int] = []
    arc = start
    head = occ2[start][0]
    while True:
        comp.append(arc)
        i, s = head
        exit_slot = (s + 2) % 4
        arc = crossings[i][exit_slot]
        o1, o2 = occ2[arc]
        head = o2 if o1 == (i, exit_slot) else o1
        if arc == start and head == occ2[start][0]:
            break
    if set(comp) != set(occ2):
        raise ConstructionError("invalid-composition: extracted knot is disconnected")
    return tuple(comp)


def extract_cycle_knot(gamma2: TwistedEmbedding, kappa) -> PlanarDiagram:
    """Delete everything except the cycle's strands from Gamma_2.

    Crossings with a deleted strand disappear, the graph vertices on the
    cycle are smoothed into the strand, and the result is the knot diagram
    of the embedded cycle, labeled kappa.
    """
    if not isinstance(gamma2, TwistedEmbedding):
        raise ConstructionError("invalid-input: expected a twisted embedding")
    kap = _check_cycle(kappa, gamma2.params.n)
    m = len(kap)
    arcs: Set[int] = set()
    for i in range(m):
        u, v = kap[i], kap[(i + 1) % m]
        arcs.update(gamma2.edge_arcs[(min(u, v), max(u, v))])

    merged, xs, vs = _resolve_deletion(gamma2.diagram, arcs)
    if vs:
        raise ConstructionError("invalid-composition: unsmoothed vertex in extraction")

    def rep(a: int) -> int:
        while a in merged:
            a = merged[a]
        return a

    fallback = rep(min(arcs))
    comp = _trace_single_component(xs, fallback)
    d = PlanarDiagram(tuple(xs), (), (comp,), ("kappa",))
    return normalize(d)
