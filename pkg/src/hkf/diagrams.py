"""Planar diagrams for links and spatial graphs.

A diagram is a combinatorial object: crossings, graph vertices, and closed
components made of arcs.  Arcs are positive integers.  Each crossing is a
4-tuple of arc labels in counterclockwise order starting at the incoming
under-strand, so slot 0 and slot 2 hold the under-strand and slots 1 and 3
hold the over-strand.  Each vertex is a tuple of incident arcs in
counterclockwise order.  A component lists its arcs in traversal order,
which fixes its orientation.  A closed curve with no crossings at all (a
free loop) is a component consisting of a single arc that appears at no
crossing or vertex.

Validation is combinatorial: arc occurrence counts, a consistent traversal
of every component through the sites, slot-0 under-in normalization, even
degree at every site, and per-connected-piece planarity via Euler's formula
applied to the faces of the rotation system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import DiagramError

Crossing = Tuple[int, int, int, int]
Occ = Tuple[str, int, int]  # (kind 'x'|'v', site index, slot)


def _default_labels(k: int) -> Tuple[str, ...]:
    return tuple("c%d" % (i + 1) for i in range(k))


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: Tuple[Crossing, ...] = ()
    vertices: Tuple[Tuple[int, ...], ...] = ()
    components: Tuple[Tuple[int, ...], ...] = ()
    labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "crossings", tuple(tuple(c) for c in self.crossings))
        object.__setattr__(self, "vertices", tuple(tuple(v) for v in self.vertices))
        object.__setattr__(
            self, "components", tuple(tuple(c) for c in self.components)
        )
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(len(self.components)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != len(self.components):
            raise DiagramError("labels and components length mismatch")

    # ---- basic queries -------------------------------------------------

    @cached_property
    def arcs(self) -> FrozenSet[int]:
        out = set()
        for comp in self.components:
            out.update(comp)
        return frozenset(out)

    @cached_property
    def occurrences(self) -> Dict[int, List[Occ]]:
        """Map each arc to the site slots where it appears."""
        occ: Dict[int, List[Occ]] = {a: [] for a in self.arcs}
        for i, x in enumerate(self.crossings):
            for s, a in enumerate(x):
                occ.setdefault(a, []).append(("x", i, s))
        for i, v in enumerate(self.vertices):
            for s, a in enumerate(v):
                occ.setdefault(a, []).append(("v", i, s))
        return occ

    def label_of(self, index: int) -> str:
        return self.labels[index]

    def component_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DiagramError("no component labeled %r" % label) from None

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def is_free_loop(self, comp_index: int) -> bool:
        comp = self.components[comp_index]
        return len(comp) == 1 and not self.occurrences.get(comp[0])

    # ---- traversal -----------------------------------------------------

    @cached_property
    def trace(self) -> "Trace":
        """Orient every component through the sites; raises on failure."""
        return _trace_diagram(self)

    def crossing_sign(self, i: int) -> int:
        return self.trace.signs[i]

    def with_labels(self, labels: Sequence[str]) -> "PlanarDiagram":
        return PlanarDiagram(self.crossings, self.vertices, self.components, tuple(labels))


@dataclass(frozen=True)
class Trace:
    """Result of orienting a diagram.

    head[a] and tail[a] give the occurrences where arc a ends and starts.
    signs[i] is the sign of crossing i (+1 when the over-strand runs from
    slot 3 to slot 1).  over_comp/under_comp give the component index
    carrying each strand of each crossing.  rotations[i] is True when the
    stored tuple has the under-strand running slot 2 to slot 0, so the
    tuple must be rotated by two to restore the slot-0 convention.
    """

    head: Dict[int, Occ]
    tail: Dict[int, Occ]
    signs: Tuple[int, ...]
    over_comp: Tuple[int, ...]
    under_comp: Tuple[int, ...]
    comp_of_arc: Dict[int, int]
    rotations: Tuple[bool, ...]


def _site_arity(d: PlanarDiagram, kind: str, idx: int) -> int:
    return 4 if kind == "x" else len(d.vertices[idx])


def _legal_passage(kind: str, s_in: int, s_out: int) -> bool:
    """May a strand enter a site at slot s_in and leave at slot s_out?

    Crossings pass straight through in either direction; which diagonal is
    the under-strand is data, but the traversal does not depend on it.
    """
    if kind == "v":
        return s_in != s_out
    return (s_out - s_in) % 4 == 2


def _trace_diagram(d: PlanarDiagram) -> Trace:
    occ = d.occurrences
    for a in occ:
        n = len(occ[a])
        if n not in (0, 2):
            raise DiagramError("arc %d used %d times" % (a, n))
        if n == 0:
            comp = [c for c in d.components if a in c]
            if not (len(comp) == 1 and len(comp[0]) == 1):
                raise DiagramError("arc %d has no endpoints but is not a free loop" % a)

    head: Dict[int, Occ] = {}
    tail: Dict[int, Occ] = {}
    used: set = set()
    comp_of_arc: Dict[int, int] = {}

    for ci, comp in enumerate(d.components):
        for a in comp:
            if a in comp_of_arc:
                raise DiagramError("arc %d appears in two components" % a)
            comp_of_arc[a] = ci
        if len(comp) == 1 and not occ[comp[0]]:
            continue  # free loop
        if len(set(comp)) != len(comp):
            raise DiagramError("component %d repeats an arc" % ci)
        if not _orient_component(d, comp, occ, head, tail, used):
            raise DiagramError("component %d does not traverse the sites" % ci)

    stray = d.arcs - set(comp_of_arc)
    if stray:
        raise DiagramError("arcs outside any component: %s" % sorted(stray))
    for a, os in occ.items():
        if a not in comp_of_arc:
            raise DiagramError("occupied arc %d missing from components" % a)
    if len(used) != sum(len(os) for os in occ.values()):
        raise DiagramError("site occurrences left unmatched by traversal")

    signs: List[int] = []
    over_comp: List[int] = []
    under_comp: List[int] = []
    rotations: List[bool] = []
    for i, x in enumerate(d.crossings):
        a, b, c, dd = x
        if head.get(a) == ("x", i, 0) and tail.get(c) == ("x", i, 2):
            rotated = False
        elif head.get(c) == ("x", i, 2) and tail.get(a) == ("x", i, 0):
            rotated = True
        else:
            raise DiagramError("crossing %d: under-strand direction unresolved" % i)
        if head.get(dd) == ("x", i, 3) and tail.get(b) == ("x", i, 1):
            over_slot_in = 3
            over_in = dd
        elif head.get(b) == ("x", i, 1) and tail.get(dd) == ("x", i, 3):
            over_slot_in = 1
            over_in = b
        else:
            raise DiagramError("crossing %d: over-strand direction unresolved" % i)
        if rotated:
            over_slot_in = (over_slot_in + 2) % 4
        signs.append(1 if over_slot_in == 3 else -1)
        rotations.append(rotated)
        over_comp.append(comp_of_arc[over_in])
        under_comp.append(comp_of_arc[a if not rotated else c])

    return Trace(
        head,
        tail,
        tuple(signs),
        tuple(over_comp),
        tuple(under_comp),
        comp_of_arc,
        tuple(rotations),
    )


def _orient_component(d, comp, occ, head, tail, used) -> bool:
    """Walk the component, assigning head/tail ends to each arc.

    The first arc's head end can be either of its two occurrences; both
    choices are tried and the walk agreeing with more of the stored slot-0
    under-in conventions wins, so an already normalized diagram keeps its
    stored directions.  Later arcs are forced by the junction with the
    previous arc.  On success the assignments are committed.
    """
    first = comp[0]
    best = None
    for first_head_i in (0, 1):
        trial_head: Dict[int, Occ] = {}
        trial_tail: Dict[int, Occ] = {}
        trial_used: set = set()
        ok = True
        h = occ[first][first_head_i]
        trial_head[first] = h
        trial_tail[first] = occ[first][1 - first_head_i]
        m = len(comp)
        for k in range(m):
            a = comp[k]
            b = comp[(k + 1) % m]
            ha = trial_head[a]
            kind, site, s_in = ha
            if ha in trial_used:
                ok = False
                break
            # the next arc must leave from the same site by a legal passage
            cands = []
            for j, ob in enumerate(occ[b]):
                if ob[0] == kind and ob[1] == site and ob not in trial_used:
                    if _legal_passage(kind, s_in, ob[2]):
                        cands.append((j, ob))
            if b in trial_tail:
                # closing the loop: b's tail is already fixed
                tb = trial_tail[b]
                if tb[0] == kind and tb[1] == site and _legal_passage(kind, s_in, tb[2]):
                    trial_used.add(ha)
                    trial_used.add(tb)
                    continue
                ok = False
                break
            picked = None
            for j, ob in cands:
                picked = (j, ob)
                break
            if picked is None:
                ok = False
                break
            j, ob = picked
            trial_used.add(ha)
            trial_used.add(ob)
            trial_tail[b] = ob
            trial_head[b] = occ[b][1 - j]
        if ok and len(trial_used) == 2 * m and not (trial_used & used):
            mismatch = sum(
                1 for t in trial_tail.values() if t[0] == "x" and t[2] == 0
            )
            if best is None or mismatch < best[0]:
                best = (mismatch, trial_head, trial_tail, trial_used)
            if mismatch == 0:
                break
    if best is None:
        return False
    head.update(best[1])
    tail.update(best[2])
    used.update(best[3])
    return True


# ---- validation --------------------------------------------------------


def validate(d: PlanarDiagram) -> List[str]:
    """Return a list of violations; an empty list means the diagram is ok."""
    out: List[str] = []
    for i, x in enumerate(d.crossings):
        if len(x) != 4:
            out.append("crossing %d arity %d" % (i, len(x)))
    if out:
        return out
    counts: Dict[int, int] = {}
    for x in d.crossings:
        for a in x:
            counts[a] = counts.get(a, 0) + 1
    for v in d.vertices:
        for a in v:
            counts[a] = counts.get(a, 0) + 1
    comp_arcs = set()
    for comp in d.components:
        comp_arcs.update(comp)
    for a, n in counts.items():
        if n != 2:
            out.append("arc %d used %d times" % (a, n))
        if a not in comp_arcs:
            out.append("arc %d not in any component" % a)
    for a in comp_arcs - set(counts):
        comp = [c for c in d.components if a in c]
        if not (comp and len(comp[0]) == 1):
            out.append("arc %d has no occurrences but is not a free loop" % a)
    for i, v in enumerate(d.vertices):
        if len(v) % 2:
            out.append("vertex %d has odd degree %d" % (i, len(v)))
        if len(v) < 2:
            out.append("vertex %d has degree < 2" % i)
    if out:
        return out
    try:
        t = d.trace
    except DiagramError as e:
        out.append(str(e))
        return out
    for i, rotated in enumerate(t.rotations):
        if rotated:
            out.append("crossing %d: slot 0 is not the incoming under-strand" % i)
    out.extend(_check_planarity(d))
    return out


def _darts(d: PlanarDiagram):
    """All darts (arc, end index) for arcs with two occurrences."""
    for a, os in d.occurrences.items():
        if len(os) == 2:
            yield (a, 0)
            yield (a, 1)


def faces(d: PlanarDiagram) -> List[List[Tuple[int, int]]]:
    """Faces of the rotation system.

    A dart (a, i) travels along arc a toward occurrence i.  Arriving at a
    site slot, the face turns to the next slot counterclockwise and leaves
    along that arc.  Returns each face as its dart cycle.
    """
    occ = d.occurrences
    slot_arc: Dict[Occ, int] = {}
    for a, os in occ.items():
        for o in os:
            slot_arc[o] = a
    out = []
    seen = set()
    for start in _darts(d):
        if start in seen:
            continue
        face = []
        cur = start
        while True:
            face.append(cur)
            seen.add(cur)
            a, i = cur
            kind, site, slot = occ[a][i]
            arity = _site_arity(d, kind, site)
            nslot = (slot + 1) % arity
            b = slot_arc[(kind, site, nslot)]
            # leave along b, away from this site
            j = 0 if occ[b][0] == (kind, site, nslot) else 1
            cur = (b, 1 - j)
            if cur == start:
                break
        out.append(face)
    return out


def _check_planarity(d: PlanarDiagram) -> List[str]:
    """Euler check V - E + F = 2 on every connected piece of the diagram."""
    occ = d.occurrences
    parent: Dict[Tuple[str, int], Tuple[str, int]] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i in range(len(d.crossings)):
        parent[("x", i)] = ("x", i)
    for i in range(len(d.vertices)):
        parent[("v", i)] = ("v", i)
    for a, os in occ.items():
        if len(os) == 2:
            union((os[0][0], os[0][1]), (os[1][0], os[1][1]))

    pieces: Dict[Tuple[str, int], Dict[str, int]] = {}
    for site in parent:
        root = find(site)
        pieces.setdefault(root, {"V": 0, "E": 0, "F": 0})["V"] += 1
    for a, os in occ.items():
        if len(os) == 2:
            pieces[find((os[0][0], os[0][1]))]["E"] += 1
    for face in faces(d):
        a, i = face[0]
        o = occ[a][i]
        pieces[find((o[0], o[1]))]["F"] += 1

    out = []
    for root, euler in pieces.items():
        if euler["V"] - euler["E"] + euler["F"] != 2:
            out.append(
                "piece at %s fails Euler planarity (V=%d E=%d F=%d)"
                % (root, euler["V"], euler["E"], euler["F"])
            )
    return out


# ---- elementary invariants ----------------------------------------------


def writhe(d: PlanarDiagram) -> int:
    return sum(d.trace.signs)


def linking_number(d: PlanarDiagram, a, b) -> int:
    """Half the signed count of crossings between components a and b.

    Components may be given by index or by label.
    """
    ia = d.component_index(a) if isinstance(a, str) else a
    ib = d.component_index(b) if isinstance(b, str) else b
    if ia == ib:
        raise ValueError("linking number needs two distinct components")
    t = d.trace
    total = 0
    for i in range(len(d.crossings)):
        pair = {t.over_comp[i], t.under_comp[i]}
        if pair == {ia, ib}:
            total += t.signs[i]
    if total % 2:
        raise DiagramError("odd inter-component crossing sum")
    return total // 2


# ---- structural operations ----------------------------------------------


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Swap over and under at every crossing (reflection through the page)."""
    t = d.trace
    new = []
    for i, (a, b, c, dd) in enumerate(d.crossings):
        # the old over-in arc becomes the incoming under-strand
        if t.signs[i] == 1:
            new.append((dd, a, b, c))
        else:
            new.append((b, c, dd, a))
    return PlanarDiagram(tuple(new), d.vertices, d.components, d.labels)


def reverse_component(d: PlanarDiagram, index: int) -> PlanarDiagram:
    """Reverse one component's orientation.

    The under-in convention stores a direction in each crossing tuple, so
    every crossing whose under-strand lies on the component rotates by two;
    the arc list is reversed for the traversal's benefit.
    """
    t = d.trace
    xs = []
    for i, (a, b, c, dd) in enumerate(d.crossings):
        if t.under_comp[i] == index:
            xs.append((c, dd, a, b))
        else:
            xs.append((a, b, c, dd))
    comps = list(d.components)
    comp = comps[index]
    comps[index] = (comp[0],) + tuple(reversed(comp[1:]))
    return PlanarDiagram(tuple(xs), d.vertices, tuple(comps), d.labels)


def normalize(d: PlanarDiagram) -> PlanarDiagram:
    """Rotate crossing tuples by two where needed so slot 0 is under-in."""
    t = d.trace
    if not any(t.rotations):
        return d
    new = []
    for i, (a, b, c, dd) in enumerate(d.crossings):
        if t.rotations[i]:
            new.append((c, dd, a, b))
        else:
            new.append((a, b, c, dd))
    return PlanarDiagram(tuple(new), d.vertices, d.components, d.labels)


def relabel_arcs(d: PlanarDiagram, mapping: Dict[int, int]) -> PlanarDiagram:
    def m(a):
        return mapping.get(a, a)

    return PlanarDiagram(
        tuple(tuple(m(a) for a in x) for x in d.crossings),
        tuple(tuple(m(a) for a in v) for v in d.vertices),
        tuple(tuple(m(a) for a in c) for c in d.components),
        d.labels,
    )


def max_arc(d: PlanarDiagram) -> int:
    return max(d.arcs, default=0)


def restrict_to_components(d: PlanarDiagram, keep) -> PlanarDiagram:
    """Delete all components except the given ones (indices or labels).

    Crossings between a kept strand and a deleted strand disappear and the
    kept strand's two arcs merge.  Vertices lose the deleted arcs.
    """
    keep_idx = {d.component_index(k) if isinstance(k, str) else k for k in keep}
    kept_arcs = set()
    for i in keep_idx:
        kept_arcs.update(d.components[i])
    merged, crossings, vertices = _resolve_deletion(d, kept_arcs)

    def rep(a):
        while a in merged:
            a = merged[a]
        return a

    comps = []
    labels = []
    for i in sorted(keep_idx):
        comp = [rep(a) for a in d.components[i]]
        comps.append(_collapse_runs(comp))
        labels.append(d.labels[i])
    out = PlanarDiagram(tuple(crossings), tuple(vertices), tuple(comps), tuple(labels))
    return normalize(out)


def _collapse_runs(comp: List[int]) -> Tuple[int, ...]:
    out: List[int] = []
    for a in comp:
        if not out or out[-1] != a:
            out.append(a)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def _resolve_deletion(d: PlanarDiagram, kept_arcs):
    """Drop sites whose strands are partly deleted, merging through-arcs.

    Returns (merge map, surviving crossings, surviving vertices).  At a
    crossing each strand is kept only when both of its arcs are kept; a
    crossing survives only if both strands are kept entirely.
    """
    t = d.trace
    merged: Dict[int, int] = {}

    def rep(a):
        while a in merged:
            a = merged[a]
        return a

    def merge(a, b):
        ra, rb = rep(a), rep(b)
        if ra != rb:
            keep, drop = (ra, rb) if ra < rb else (rb, ra)
            merged[drop] = keep

    crossings = []
    for i, (a, b, c, dd) in enumerate(d.crossings):
        under_kept = a in kept_arcs and c in kept_arcs
        over_kept = b in kept_arcs and dd in kept_arcs
        if under_kept and over_kept:
            crossings.append((a, b, c, dd))
        else:
            if under_kept:
                merge(a, c)
            if over_kept:
                merge(b, dd)
    vertices = []
    for v in d.vertices:
        kept = [a for a in v if a in kept_arcs]
        if not kept:
            continue
        if len(kept) == 2:
            merge(kept[0], kept[1])
        else:
            vertices.append(tuple(kept))
    out_x = [tuple(rep(a) for a in x) for x in crossings]
    out_v = [tuple(rep(a) for a in v) for v in vertices]
    return merged, out_x, out_v


def connected_sum(d1: PlanarDiagram, d2: PlanarDiagram, arc1: int, arc2: int) -> PlanarDiagram:
    """Connected sum of two knot diagrams along the chosen arcs."""
    if len(d1.components) != 1 or len(d2.components) != 1:
        raise ValueError("connected sum needs single-component diagrams")
    off = max_arc(d1)
    d2r = relabel_arcs(d2, {a: a + off for a in d2.arcs})
    arc2 += off
    c1, c2 = d1.components[0], d2r.components[0]
    if arc1 not in c1 or arc2 not in c2:
        raise ValueError("chosen arcs not in the diagrams")

    if not d1.occurrences[arc1]:
        # d1 is a bare unknot: the sum is d2
        return PlanarDiagram(d2.crossings, d2.vertices, d2.components, d1.labels)
    if not d2r.occurrences[arc2]:
        return d1

    t1, t2 = d1.trace, d2r.trace
    h1 = t1.head[arc1]
    h2 = t2.head[arc2]

    def put(diag_crossings, diag_vertices, occ: Occ, new_arc: int):
        kind, site, slot = occ
        if kind == "x":
            x = list(diag_crossings[site])
            x[slot] = new_arc
            diag_crossings[site] = tuple(x)
        else:
            v = list(diag_vertices[site])
            v[slot] = new_arc
            diag_vertices[site] = tuple(v)

    xs = list(d1.crossings) + list(d2r.crossings)
    vs = list(d1.vertices) + list(d2r.vertices)
    nx1 = len(d1.crossings)
    nv1 = len(d1.vertices)
    # h1 lives in d1's sites, h2 in d2r's (shifted) sites
    h2s = (h2[0], h2[1] + (nx1 if h2[0] == "x" else nv1), h2[2])
    h1s = h1
    put(xs, vs, h1s, arc2)
    put(xs, vs, h2s, arc1)

    i1 = c1.index(arc1)
    i2 = c2.index(arc2)
    comp = c1[: i1 + 1] + c2[i2 + 1 :] + c2[: i2 + 1] + c1[i1 + 1 :]
    out = PlanarDiagram(tuple(xs), tuple(vs), (comp,), d1.labels)
    return normalize(out)


# ---- canonical form ------------------------------------------------------


def canonical_form(d: PlanarDiagram, include_labels: bool = True):
    """A relabeling-invariant serialization of the diagram.

    Breadth-first traversal from every possible root dart assigns new arc
    numbers in visit order; the lexicographically least serialization wins.
    Orientations are preserved.
    """
    d = normalize(d)
    occ = d.occurrences
    best = None
    roots = sorted(a for a, os in occ.items() if len(os) == 2)
    if not roots:
        # only free loops
        key = ((), (), tuple(sorted(d.labels)) if include_labels else len(d.components))
        return key
    for root in roots:
        for end in (0, 1):
            ser = _serialize_from(d, occ, root, end, include_labels)
            if best is None or ser < best:
                best = ser
    return best


def _serialize_from(d, occ, root, end, include_labels):
    slot_arc: Dict[Occ, int] = {}
    for a, os in occ.items():
        for o in os:
            slot_arc[o] = a
    new: Dict[int, int] = {}
    counter = itertools.count(1)
    new[root] = next(counter)
    queue = [occ[root][end]]
    seen_sites = set()
    while queue:
        kind, site, slot = queue.pop(0)
        if (kind, site) in seen_sites:
            continue
        seen_sites.add((kind, site))
        arity = _site_arity(d, kind, site)
        for k in range(arity):
            s = (slot + k) % arity
            a = slot_arc[(kind, site, s)]
            if a not in new:
                new[a] = next(counter)
            o0, o1 = occ[a]
            other = o0 if o1 == (kind, site, s) else o1
            if (other[0], other[1]) not in seen_sites:
                queue.append(other)
    for comp in d.components:
        for a in comp:
            if a not in new:
                new[a] = next(counter)

    xs = sorted(tuple(new[a] for a in x) for x in d.crossings)
    vs = sorted(_min_rotation(tuple(new[a] for a in v)) for v in d.vertices)
    comps = []
    for i, comp in enumerate(d.components):
        t = _min_rotation(tuple(new[a] for a in comp))
        if include_labels:
            comps.append((d.labels[i], t))
        else:
            comps.append(t)
    comps.sort()
    return (tuple(xs), tuple(vs), tuple(comps))


def _min_rotation(t: Tuple[int, ...]) -> Tuple[int, ...]:
    if not t:
        return t
    return min(t[i:] + t[:i] for i in range(len(t)))


def relabel_sequential(d: PlanarDiagram) -> PlanarDiagram:
    """Renumber arcs 1..m in component traversal order."""
    mapping: Dict[int, int] = {}
    counter = itertools.count(1)
    for comp in d.components:
        for a in comp:
            if a not in mapping:
                mapping[a] = next(counter)
    return relabel_arcs(d, mapping)


# ---- twist sites ---------------------------------------------------------


@dataclass(frozen=True)
class TwistSite:
    """A disk region crossed by parallel strands, where twists can go.

    strand_arcs lists the arcs crossing the disk in lane order.  entry_ends
    gives, for each arc, the site occurrence bounding it on the entry side
    of the region, so an insertion knows which half of the cut arc keeps
    the old label.  handedness +1 inserts right-handed twists for positive
    counts (the strand on the lower lane passes under).
    """

    site_id: str
    strand_arcs: Tuple[int, ...]
    entry_ends: Tuple[Occ, ...]
    handedness: int = 1

    def __post_init__(self) -> None:
        if len(set(self.strand_arcs)) != len(self.strand_arcs):
            raise DiagramError("twist site %s repeats an arc" % self.site_id)
        if len(self.entry_ends) != len(self.strand_arcs):
            raise DiagramError("twist site %s entry list mismatched" % self.site_id)
        if self.handedness not in (1, -1):
            raise DiagramError("twist site %s handedness must be +-1" % self.site_id)


def insert_full_twists(d: PlanarDiagram, site: TwistSite, m: int) -> PlanarDiagram:
    """Insert m full twists on the site's strands; m may be negative.

    Appends 2*|m|*C(k,2) crossings for k strands; existing crossing and
    vertex indices are unchanged.  m = 0 returns the diagram untouched.
    """
    return insert_full_twists_traced(d, site, m)[0]


def insert_full_twists_traced(
    d: PlanarDiagram, site: TwistSite, m: int
) -> Tuple[PlanarDiagram, Dict[int, Tuple[int, ...]]]:
    """insert_full_twists plus a map from each site arc to its pieces.

    The pieces are listed from the entry side; the first piece keeps the
    original arc label.  Arcs away from the site are not in the map.
    """
    if m == 0:
        return d, {}
    k = len(site.strand_arcs)
    if k < 2:
        return d, {}
    occ = d.occurrences
    for a, e in zip(site.strand_arcs, site.entry_ends):
        if a not in occ or len(occ[a]) != 2:
            raise DiagramError("site %s: arc %d not available" % (site.site_id, a))
        if e not in occ[a]:
            raise DiagramError("site %s: entry end of arc %d is wrong" % (site.site_id, a))

    counter = itertools.count(max_arc(d) + 1)
    lanes = list(site.strand_arcs)
    pieces: Dict[int, List[int]] = {a: [a] for a in lanes}
    origin: Dict[int, int] = {a: a for a in lanes}
    crossings = list(d.crossings)
    positive = site.handedness * (1 if m > 0 else -1)
    word = list(range(k - 1)) * (k * abs(m))
    for j in word:
        left, right = lanes[j], lanes[j + 1]
        nl, nr = next(counter), next(counter)
        if positive == 1:
            # lower lane under: sign +1 for rightward-oriented strands
            crossings.append((right, nl, nr, left))
        else:
            crossings.append((left, right, nl, nr))
        lanes[j], lanes[j + 1] = nr, nl
        o = origin.pop(left)
        origin[nl] = o
        pieces[o].append(nl)
        o = origin.pop(right)
        origin[nr] = o
        pieces[o].append(nr)

    # reattach each strand's far end to its final piece
    xs = crossings
    vs = list(d.vertices)
    for a, e in zip(site.strand_arcs, site.entry_ends):
        far = occ[a][0] if occ[a][1] == e else occ[a][1]
        last = pieces[a][-1]
        kind, si, slot = far
        if kind == "x":
            t = list(xs[si])
            t[slot] = last
            xs[si] = tuple(t)
        else:
            t = list(vs[si])
            t[slot] = last
            vs[si] = tuple(t)

    comps = []
    t = d.trace
    for comp in d.components:
        out: List[int] = []
        for a in comp:
            if a in pieces and len(pieces[a]) > 1:
                entry = site.entry_ends[site.strand_arcs.index(a)]
                if t.tail[a] == entry:
                    out.extend(pieces[a])
                else:
                    out.extend(reversed(pieces[a]))
            else:
                out.append(a)
        comps.append(tuple(out))
    out_d = PlanarDiagram(tuple(xs), tuple(vs), tuple(comps), d.labels)
    return normalize(out_d), {a: tuple(ps) for a, ps in pieces.items()}


# ---- annulus tangles and doubling ----------------------------------------


@dataclass(frozen=True)
class Strand:
    """An open strand of a tangle, arcs listed from the left end."""

    name: str
    arcs: Tuple[int, ...]


@dataclass(frozen=True)
class AnnulusTangle:
    """A tangle in disk x interval: open strands plus internal loops.

    left_ends and right_ends list strand names by boundary position, top
    to bottom.  A strand appearing on both ends runs through; a strand
    whose name appears twice on one end is a hairpin there.  Loops are
    closed components contained in the tangle, given like diagram
    components with labels.
    """

    crossings: Tuple[Crossing, ...]
    vertices: Tuple[Tuple[int, ...], ...]
    strands: Tuple[Strand, ...]
    loops: Tuple[Tuple[int, ...], ...]
    loop_labels: Tuple[str, ...]
    left_ends: Tuple[Tuple[str, int], ...]
    right_ends: Tuple[Tuple[str, int], ...]
    twist_sites: Tuple[TwistSite, ...] = ()

    def strand(self, name: str) -> Strand:
        for s in self.strands:
            if s.name == name:
                return s
        raise DiagramError("no strand named %r" % name)

    def end_arcs(self) -> Tuple[Dict[str, List[int]], Dict[str, List[int]]]:
        """Arc labels at each end keyed by strand name (ends store arcs)."""
        left = {}
        right = {}
        for name, arc in self.left_ends:
            left.setdefault(name, []).append(arc)
        for name, arc in self.right_ends:
            right.setdefault(name, []).append(arc)
        return left, right


_REFLECT_SLOT = (0, 3, 2, 1)


def _reflect_crossing(x: Crossing) -> Crossing:
    a, b, c, d = x
    return (a, d, c, b)


def mirror_occ(occ: Occ, x_offset: int, v_offset: int, v_len) -> Occ:
    """Image of a site occurrence under the reflection of double_tangle."""
    kind, i, s = occ
    if kind == "x":
        return ("x", i + x_offset, _REFLECT_SLOT[s])
    return ("v", i + v_offset, v_len(i) - 1 - s)


@dataclass(frozen=True)
class DoubledTangle:
    diagram: PlanarDiagram
    glue_arcs_right: Tuple[int, ...]
    glue_arcs_left: Tuple[int, ...]
    sites: Dict[str, TwistSite]
    copy_map: Dict[int, int]


def double_tangle(t: AnnulusTangle) -> DoubledTangle:
    """Glue the tangle to its reflected copy along both ends.

    The second copy is the reflection through the right-hand gluing disk,
    so over and under are preserved while the counterclockwise order at
    every site reverses.  Right ends glue directly; left ends glue around
    the outside, which closes every strand.  The copy swap is the 180
    degree symmetry of the result.
    """
    offset = 0
    arcs = set()
    for x in t.crossings:
        arcs.update(x)
    for v in t.vertices:
        arcs.update(v)
    for s in t.strands:
        arcs.update(s.arcs)
    for lp in t.loops:
        arcs.update(lp)
    offset = max(arcs, default=0)

    def phi(a: int) -> int:
        return a + offset

    xs = list(t.crossings)
    xs += [tuple(phi(a) for a in _reflect_crossing(x)) for x in t.crossings]
    vs = list(t.vertices)
    vs += [tuple(phi(a) for a in reversed(v)) for v in t.vertices]

    left, right = t.end_arcs()
    # merge arcs across the gluings: phi(a) collapses back to a
    merge: Dict[int, int] = {}
    glue_right = []
    glue_left = []
    for name, arc in t.right_ends:
        merge[phi(arc)] = arc
        glue_right.append(arc)
    for name, arc in t.left_ends:
        merge[phi(arc)] = arc
        glue_left.append(arc)

    def rep(a: int) -> int:
        return merge.get(a, a)

    xs = [tuple(rep(a) for a in x) for x in xs]
    vs = [tuple(rep(a) for a in v) for v in vs]

    comps: List[Tuple[int, ...]] = []
    labels: List[str] = []
    for s in t.strands:
        seq = list(s.arcs) + [rep(phi(a)) for a in reversed(s.arcs)]
        comps.append(_collapse_runs(seq))
        labels.append(s.name)
    for lp, lab in zip(t.loops, t.loop_labels):
        comps.append(lp)
        labels.append(lab + "1")
    for lp, lab in zip(t.loops, t.loop_labels):
        comps.append(tuple(rep(phi(a)) for a in lp))
        labels.append(lab + "2")

    d_raw = PlanarDiagram(tuple(xs), tuple(vs), tuple(comps), tuple(labels))
    tr = d_raw.trace
    d = normalize(d_raw)

    def adj(o: Occ) -> Occ:
        # normalize may have rotated the tuple this occurrence points into
        if o[0] == "x" and tr.rotations[o[1]]:
            return ("x", o[1], (o[2] + 2) % 4)
        return o

    nx, nv = len(t.crossings), len(t.vertices)

    def v_len(i: int) -> int:
        return len(t.vertices[i])

    sites: Dict[str, TwistSite] = {}
    for site in t.twist_sites:
        sites[site.site_id + "1"] = TwistSite(
            site.site_id + "1",
            site.strand_arcs,
            tuple(adj(e) for e in site.entry_ends),
            site.handedness,
        )
        m_arcs = tuple(rep(phi(a)) for a in site.strand_arcs)
        m_ends = []
        for a, e in zip(site.strand_arcs, site.entry_ends):
            other = _other_occ_in_tangle(t, a, e)
            m_ends.append(adj(mirror_occ(other, nx, nv, v_len)))
        sites[site.site_id + "2"] = TwistSite(
            site.site_id + "2", m_arcs, tuple(m_ends), site.handedness
        )
    copy_map: Dict[int, int] = {}
    for a in arcs:
        b = rep(phi(a))
        copy_map[a] = b
        copy_map[b] = a
    return DoubledTangle(d, tuple(glue_right), tuple(glue_left), sites, copy_map)


def _other_occ_in_tangle(t: AnnulusTangle, arc: int, e: Occ) -> Occ:
    found = []
    for i, x in enumerate(t.crossings):
        for s, a in enumerate(x):
            if a == arc:
                found.append(("x", i, s))
    for i, v in enumerate(t.vertices):
        for s, a in enumerate(v):
            if a == arc:
                found.append(("v", i, s))
    for o in found:
        if o != e:
            return o
    raise DiagramError("arc %d has no second occurrence in the tangle" % arc)


def add_meridian_loop(d: PlanarDiagram, site: TwistSite, label: str) -> PlanarDiagram:
    """Add an unknotted circle encircling the strands of a twist site.

    The circle crosses each strand twice, once per rail: strands pass over
    the rail on the entry side and under the other rail, so the circle
    bounds a disk pierced exactly by the site's strands.  Adds 2k crossings
    for k strands.
    """
    arcs = site.strand_arcs
    k = len(arcs)
    if k == 0:
        raise ValueError("meridian must encircle at least one strand")
    occ = d.occurrences
    t = d.trace
    counter = itertools.count(max_arc(d) + 1)
    xs = list(d.crossings)
    vs = list(d.vertices)
    # cut each strand twice; piece a0 keeps the entry-side occurrence,
    # mid sits inside the circle, far takes the far occurrence
    pieces: Dict[int, Tuple[int, int, int]] = {}
    for a, e in zip(arcs, site.entry_ends):
        if len(occ.get(a, ())) != 2:
            raise DiagramError("meridian cannot pass through arc %d" % a)
        if e not in occ[a]:
            raise DiagramError("site %s: entry end of arc %d is wrong" % (site.site_id, a))
        mid, far = next(counter), next(counter)
        pieces[a] = (a, mid, far)

    ring_first = next(counter)
    ring = [ring_first]
    # entry-side rail: the ring ascends it, passing under strands bottom up
    for a in reversed(arcs):
        a0, mid, far = pieces[a]
        r_in = ring[-1]
        r_out = next(counter)
        ring.append(r_out)
        xs.append((r_in, mid, r_out, a0))
    # far rail: the ring descends, passing over strands top down
    for i, a in enumerate(arcs):
        a0, mid, far = pieces[a]
        r_in = ring[-1]
        if i == k - 1:
            r_out = ring_first
        else:
            r_out = next(counter)
            ring.append(r_out)
        xs.append((mid, r_out, far, r_in))

    # reattach far ends
    for a, e in zip(arcs, site.entry_ends):
        far = pieces[a][2]
        other = occ[a][0] if occ[a][1] == e else occ[a][1]
        kind, si, slot = other
        if kind == "x":
            row = list(xs[si])
            row[slot] = far
            xs[si] = tuple(row)
        else:
            row = list(vs[si])
            row[slot] = far
            vs[si] = tuple(row)

    comps = []
    for comp in d.components:
        out: List[int] = []
        for a in comp:
            if a in pieces:
                entry = site.entry_ends[arcs.index(a)]
                if t.tail[a] == entry:
                    out.extend(pieces[a])
                else:
                    out.extend(reversed(pieces[a]))
            else:
                out.append(a)
        comps.append(tuple(out))
    comps.append(tuple(ring))
    labels = d.labels + (label,)
    out_d = PlanarDiagram(tuple(xs), tuple(vs), tuple(comps), labels)
    return normalize(out_d)
