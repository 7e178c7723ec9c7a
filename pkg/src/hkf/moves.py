"""Reidemeister moves and deterministic diagram simplification.

Move sites are small tuples naming where a move acts:

* R1 remove: ``(i,)`` for a kinked crossing i; R1 add: ``(arc, variant)``
  with variant 0..3 selecting loop handedness and which passage comes
  first along the strand.
* R2 remove: ``(i, j)`` for the two crossings of a removable bigon; R2
  add: ``((a, ia), (b, ib))`` two darts of a common face, the first
  dart's strand passing over.
* R3: ``(d0, d1, d2)`` the darts of a triangular face rotated so the
  sliding strand's side comes first; the ``direction`` argument is
  ignored for R3.

A dart ``(a, i)`` travels along arc a toward its occurrence ``i``, as in
:func:`hkf.diagrams.faces`.
"""

from typing import Dict, List, Optional, Sequence, Set, Tuple

from .diagrams import PlanarDiagram, canonical_form, faces, max_arc, validate
from .errors import MoveError

Dart = Tuple[int, int]
MoveDescriptor = Tuple[str, str, tuple]


# ---- component reconstruction -------------------------------------------


def _vertex_pairing(d: PlanarDiagram) -> Dict[Tuple[int, int], int]:
    """Map (vertex index, entry slot) -> exit slot, from the current trace."""
    t = d.trace
    pairing: Dict[Tuple[int, int], int] = {}
    for comp in d.components:
        m = len(comp)
        for k in range(m):
            a, b = comp[k], comp[(k + 1) % m]
            ha = t.head.get(a)
            if ha is None or ha[0] != "v":
                continue
            tb = t.tail[b]
            pairing[(ha[1], ha[2])] = tb[2]
            pairing[(tb[1], tb[2])] = ha[2]
    return pairing


def _rebuild(
    d: PlanarDiagram,
    new_crossings: Sequence[Tuple[int, int, int, int]],
    relabel: Dict[int, int],
) -> PlanarDiagram:
    """Reassemble a diagram after a local rewrite of its crossings.

    ``relabel`` sends absorbed arc labels to a surviving representative
    (chains allowed).  Components are rebuilt by walking the strand
    wiring: crossings pass straight through, vertex passages keep the
    slot pairing they had in ``d``.  Each new cycle inherits label and
    position from the old component that contributed its arcs.
    """

    def rep(a: int) -> int:
        while a in relabel:
            a = relabel[a]
        return a

    xs = [tuple(rep(a) for a in x) for x in new_crossings]
    vs = [tuple(rep(a) for a in v) for v in d.vertices]
    pairing = _vertex_pairing(d)

    occ: Dict[int, List[Tuple[str, int, int]]] = {}
    for i, x in enumerate(xs):
        for s, a in enumerate(x):
            occ.setdefault(a, []).append(("x", i, s))
    for i, v in enumerate(vs):
        for s, a in enumerate(v):
            occ.setdefault(a, []).append(("v", i, s))
    for a, os in occ.items():
        if len(os) != 2:
            raise MoveError("rewrite left arc %d with %d ends" % (a, len(os)))

    old_pairs: Set[Tuple[int, int]] = set()
    for comp in d.components:
        m = len(comp)
        if m < 2:
            continue
        for k in range(m):
            p, q = rep(comp[k]), rep(comp[(k + 1) % m])
            if p != q:
                old_pairs.add((p, q))

    def orient(cycle: Tuple[int, ...]) -> Tuple[int, ...]:
        # The walk direction is arbitrary; component order encodes the
        # orientation, so align with the surviving old adjacencies.
        m = len(cycle)
        if m < 2:
            return cycle
        vote = 0
        for k in range(m):
            p, q = cycle[k], cycle[(k + 1) % m]
            if (p, q) in old_pairs:
                vote += 1
            if (q, p) in old_pairs:
                vote -= 1
        if vote < 0:
            return (cycle[0],) + tuple(reversed(cycle[1:]))
        return cycle

    cycles: List[Tuple[int, ...]] = []
    seen: Set[int] = set()
    for a0 in sorted(occ):
        if a0 in seen:
            continue
        cycle = [a0]
        exit_occ = occ[a0][0]
        while True:
            kind, i, s = exit_occ
            if kind == "x":
                s_out = (s + 2) % 4
                b = xs[i][s_out]
            else:
                s_out = pairing[(i, s)]
                b = vs[i][s_out]
            if b == a0:
                break
            cycle.append(b)
            seen.add(b)
            born = (kind, i, s_out)
            os = occ[b]
            exit_occ = os[1] if os[0] == born else os[0]
        seen.add(a0)
        cycles.append(orient(tuple(cycle)))

    new_comps: List[Tuple[int, ...]] = []
    used: Set[int] = set()
    for comp in d.components:
        reps = []
        for a in comp:
            r = rep(a)
            if r not in reps:
                reps.append(r)
        hit = None
        for ci, cyc in enumerate(cycles):
            if ci not in used and any(r in cyc for r in reps):
                hit = ci
                break
        if hit is None:
            if any(occ.get(r) for r in reps):
                raise MoveError("rewrite merged components")
            new_comps.append((reps[0],))
        else:
            used.add(hit)
            new_comps.append(cycles[hit])
    if len(used) != len(cycles):
        raise MoveError("rewrite split a component")

    out = PlanarDiagram(tuple(xs), tuple(vs), tuple(new_comps), d.labels)
    problems = validate(out)
    if problems:
        raise MoveError("rewrite produced an invalid diagram: %s" % problems[0])
    return out


# ---- shared removal machinery --------------------------------------------


def _merge_map(pairs: Sequence[Tuple[int, int]]) -> Dict[int, int]:
    """Union arc pairs; each class maps onto its least label."""
    parent: Dict[int, int] = {}

    def find(a: int) -> int:
        while a in parent and parent[a] != a:
            a = parent[a]
        return a

    for p, q in pairs:
        rp, rq = find(p), find(q)
        if rp == rq:
            continue
        if rq < rp:
            rp, rq = rq, rp
        parent[rq] = rp
    out = {}
    for a in parent:
        r = find(a)
        if r != a:
            out[a] = r
    return out


def _remove_crossings(d: PlanarDiagram, idxs: Sequence[int]) -> PlanarDiagram:
    """Delete crossings, reconnecting both strands straight through."""
    drop = set(idxs)
    pairs = []
    for i in drop:
        a, b, c, dd = d.crossings[i]
        pairs.append((a, c))
        pairs.append((b, dd))
    survivors = [x for i, x in enumerate(d.crossings) if i not in drop]
    return _rebuild(d, survivors, _merge_map(pairs))


# ---- R1 -------------------------------------------------------------------


def _retarget(
    xs: List[list], vs: List[list], occ: Tuple[str, int, int], new_arc: int
) -> None:
    """Point one site slot at a different arc (for arc splitting)."""
    kind, i, s = occ
    if kind == "x":
        xs[i][s] = new_arc
    else:
        vs[i][s] = new_arc


def _r1_removable(d: PlanarDiagram, i: int) -> bool:
    x = d.crossings[i]
    return any(x[s] == x[(s + 1) % 4] for s in range(4))


def _r1_remove(d: PlanarDiagram, site: tuple) -> PlanarDiagram:
    (i,) = site
    if not (0 <= i < len(d.crossings)) or not _r1_removable(d, i):
        raise MoveError("no kink at crossing %s" % (site,))
    return _remove_crossings(d, [i])


def _r1_add(d: PlanarDiagram, site: tuple) -> PlanarDiagram:
    a, variant = site
    if a not in d.arcs:
        raise MoveError("no arc %r" % (a,))
    if variant not in (0, 1, 2, 3):
        raise MoveError("R1 variant must be 0..3")
    m = max_arc(d) + 1
    loop_only = not d.occurrences.get(a)
    f = a if loop_only else m + 1
    tuples = {
        0: (a, f, m, m),  # under first, positive
        1: (a, m, m, f),  # under first, negative
        2: (m, m, f, a),  # over first, positive
        3: (m, a, f, m),  # over first, negative
    }
    xs = [list(x) for x in d.crossings]
    vs = [list(v) for v in d.vertices]
    if not loop_only:
        # the far piece takes over the head-end occurrence of a
        _retarget(xs, vs, d.trace.head[a], f)
    xs.append(list(tuples[variant]))
    comps = []
    for comp in d.components:
        if a in comp:
            k = comp.index(a)
            tail = (m,) if loop_only else (m, f)
            comps.append(comp[: k + 1] + tail + comp[k + 1 :])
        else:
            comps.append(comp)
    out = PlanarDiagram(
        tuple(tuple(x) for x in xs),
        tuple(tuple(v) for v in vs),
        tuple(comps),
        d.labels,
    )
    problems = validate(out)
    if problems:
        raise MoveError("R1 add failed: %s" % problems[0])
    return out


# ---- R2 -------------------------------------------------------------------


def _slot_of(d: PlanarDiagram, arc: int, crossing: int) -> int:
    for kind, i, s in d.occurrences[arc]:
        if kind == "x" and i == crossing:
            return s
    raise MoveError("arc %d does not meet crossing %d" % (arc, crossing))


def _is_over_slot(s: int) -> bool:
    return s % 2 == 1


def _r2_removable_site(d: PlanarDiagram, face) -> Optional[Tuple[int, int]]:
    (x, ix), (y, iy) = face
    o1 = d.occurrences[x][ix]
    o2 = d.occurrences[y][iy]
    if o1[0] != "x" or o2[0] != "x":
        return None
    i, j = o1[1], o2[1]
    if i == j or x == y:
        return None
    # one strand must pass over at both crossings
    if _is_over_slot(o1[2]) != _is_over_slot(_slot_of(d, x, j)):
        return None
    return (i, j) if i < j else (j, i)


def _r2_remove(d: PlanarDiagram, site: tuple) -> PlanarDiagram:
    want = tuple(sorted(site))
    for face in faces(d):
        if len(face) == 2 and _r2_removable_site(d, face) == want:
            return _remove_crossings(d, want)
    raise MoveError("no removable bigon at crossings %s" % (site,))


def _r2_add(d: PlanarDiagram, site: tuple) -> PlanarDiagram:
    (a, ia), (b, ib) = site
    if a == b:
        raise MoveError("R2 add needs darts on two distinct arcs")
    if not any((a, ia) in face and (b, ib) in face for face in faces(d)):
        raise MoveError("darts %s do not share a face" % (site,))
    t = d.trace
    sa = 1 if d.occurrences[a][ia] == t.head[a] else -1
    sb = 1 if d.occurrences[b][ib] == t.head[b] else -1
    base = max_arc(d)
    ta, na = base + 1, base + 2  # tip and far pieces of a
    tb, nb = base + 3, base + 4  # middle and far pieces of b
    # pieces run a, ta, na and b, tb, nb along the darts; the first cut
    # of a meets the second cut of b and vice versa, and the crossing
    # chiralities are opposite, fixed by the strand directions
    under_p = (b, tb) if sb == 1 else (tb, b)
    under_q = (tb, nb) if sb == 1 else (nb, tb)
    over_r = (a, ta) if sa == 1 else (ta, a)
    over_s = (ta, na) if sa == 1 else (na, ta)

    def mk(u, o, chi):
        return (u[0], o[1], u[1], o[0]) if chi == 1 else (u[0], o[0], u[1], o[1])

    chi = sa * sb
    x1 = mk(under_q, over_r, -chi)
    x2 = mk(under_p, over_s, chi)
    xs = [list(x) for x in d.crossings]
    vs = [list(v) for v in d.vertices]
    # far pieces take over the dart-end occurrences
    _retarget(xs, vs, d.occurrences[a][ia], na)
    _retarget(xs, vs, d.occurrences[b][ib], nb)
    xs.extend([list(x1), list(x2)])

    comps: List[Tuple[int, ...]] = []
    for comp in d.components:
        out = list(comp)
        if a in out:
            k = out.index(a)
            if sa == 1:
                out[k + 1 : k + 1] = [ta, na]
            else:
                out[k:k] = [na, ta]
        if b in out:
            k = out.index(b)
            if sb == 1:
                out[k + 1 : k + 1] = [tb, nb]
            else:
                out[k:k] = [nb, tb]
        comps.append(tuple(out))
    result = PlanarDiagram(
        tuple(tuple(x) for x in xs),
        tuple(tuple(v) for v in vs),
        tuple(comps),
        d.labels,
    )
    problems = validate(result)
    if problems:
        raise MoveError("R2 add failed: %s" % problems[0])
    return result


# ---- R3 -------------------------------------------------------------------


def _r3_sites_of_face(d: PlanarDiagram, face) -> List[tuple]:
    """All legal R3 sites on a triangle, rotated moving-side-first."""
    corners = []
    sides = []
    for arc, i in face:
        o = d.occurrences[arc][i]
        if o[0] != "x":
            return []
        sides.append(arc)
        corners.append(o[1])
    if len(set(corners)) != 3 or len(set(sides)) != 3:
        return []
    out = []
    for mv in range(3):
        # side mv meets the others at corners mv-1 and mv
        over_prev = _is_over_slot(_slot_of(d, sides[mv], corners[(mv - 1) % 3]))
        over_here = _is_over_slot(_slot_of(d, sides[mv], corners[mv]))
        if over_prev == over_here:
            out.append(tuple(face[(mv + k) % 3] for k in range(3)))
    return out


def _r3_live_sites(d: PlanarDiagram) -> List[tuple]:
    out = []
    for face in faces(d):
        if len(face) == 3:
            out.extend(_r3_sites_of_face(d, face))
    return out


def _r3_apply(d: PlanarDiagram, site: tuple) -> PlanarDiagram:
    if tuple(site) not in _r3_live_sites(d):
        raise MoveError("no legal R3 at %s" % (site,))
    (y, iy), (z, iz), (x, ix) = site  # y is the sliding side
    # corner joining sides y,z / z,x / x,y respectively
    c2 = d.occurrences[y][iy][1]
    c3 = d.occurrences[z][iz][1]
    c1 = d.occurrences[x][ix][1]
    t = d.trace

    def outer(crossing: int, face_arc: int) -> int:
        s = _slot_of(d, face_arc, crossing)
        return d.crossings[crossing][(s + 2) % 4]

    x_out1 = outer(c1, x)
    y_out1 = outer(c1, y)
    y_out2 = outer(c2, y)
    z_out2 = outer(c2, z)
    z_out3 = outer(c3, z)
    x_out3 = outer(c3, x)

    base = max_arc(d)
    nx, nz = base + 1, base + 2

    def incoming(arc: int, crossing: int, face_arc: int) -> bool:
        """Does `arc`, sitting opposite `face_arc`, flow into the corner?"""
        s = (_slot_of(d, face_arc, crossing) + 2) % 4
        return t.head[arc] == ("x", crossing, s)

    def make_crossing(u_in, u_out, o_in, o_out, sign):
        if sign == 1:
            return (u_in, o_out, u_out, o_in)
        return (u_in, o_in, u_out, o_out)

    def rebuilt_corner(old, y_pieces, other_pieces):
        """New tuple for a corner of the slid strand; sign inherited."""
        sign = t.signs[old]
        if _is_over_slot(_slot_of(d, y, old)):
            return make_crossing(*other_pieces, *y_pieces, sign)
        return make_crossing(*y_pieces, *other_pieces, sign)

    # The slide reverses the order in which the moving strand meets its
    # two crossings, so its outer arcs change corners.
    if incoming(y_out1, c1, y):
        y_c1 = (y, y_out2)
        y_c2 = (y_out1, y)
    else:
        y_c1 = (y_out2, y)
        y_c2 = (y, y_out1)
    x_c1 = (x_out3, nx) if incoming(x_out3, c3, x) else (nx, x_out3)
    z_c2 = (z_out3, nz) if incoming(z_out3, c3, z) else (nz, z_out3)

    xs = list(d.crossings)
    xs[c1] = rebuilt_corner(c1, y_c1, x_c1)
    xs[c2] = rebuilt_corner(c2, y_c2, z_c2)
    c3_tuple = list(d.crossings[c3])
    c3_tuple[(_slot_of(d, x, c3) + 2) % 4] = nx
    c3_tuple[(_slot_of(d, z, c3) + 2) % 4] = nz
    xs[c3] = tuple(c3_tuple)

    return _rebuild(d, xs, _merge_map([(x, x_out1), (z, z_out2)]))


# ---- public API -----------------------------------------------------------


def enumerate_moves(
    d: PlanarDiagram,
    kinds: Sequence[str] = ("R1", "R2", "R3"),
    directions: Sequence[str] = ("add", "remove"),
) -> List[MoveDescriptor]:
    """All move candidates, sorted for deterministic iteration."""
    out: List[MoveDescriptor] = []
    if "R1" in kinds:
        if "remove" in directions:
            for i in range(len(d.crossings)):
                if _r1_removable(d, i):
                    out.append(("R1", "remove", (i,)))
        if "add" in directions:
            for a in sorted(d.arcs):
                for v in range(4):
                    out.append(("R1", "add", (a, v)))
    if "R2" in kinds:
        seen2: Set[tuple] = set()
        for face in faces(d):
            if "remove" in directions and len(face) == 2:
                site = _r2_removable_site(d, face)
                if site and site not in seen2:
                    seen2.add(site)
                    out.append(("R2", "remove", site))
            if "add" in directions:
                darts = sorted(face)
                for da in darts:
                    for db in darts:
                        if da != db and da[0] != db[0]:
                            out.append(("R2", "add", (da, db)))
    if "R3" in kinds:
        for site in sorted(set(_r3_live_sites(d))):
            out.append(("R3", "apply", site))
    return sorted(out)


def apply_reidemeister(
    d: PlanarDiagram, move: str, site: tuple, direction: str = "remove"
) -> PlanarDiagram:
    """Apply one Reidemeister move at an explicit site.

    Raises MoveError when the move is not applicable there.  For R3 the
    direction argument is ignored (the move neither adds nor removes).
    """
    if move == "R1":
        if direction == "remove":
            return _r1_remove(d, tuple(site))
        if direction == "add":
            return _r1_add(d, tuple(site))
        raise MoveError("unknown direction %r" % (direction,))
    if move == "R2":
        if direction == "remove":
            return _r2_remove(d, tuple(site))
        if direction == "add":
            return _r2_add(d, tuple(site))
        raise MoveError("unknown direction %r" % (direction,))
    if move == "R3":
        return _r3_apply(d, tuple(site))
    raise MoveError("unknown move %r" % (move,))


def simplify_with_trace(
    d: PlanarDiagram, budget: int = 10000, r3_depth: int = 2
) -> Tuple[PlanarDiagram, List[MoveDescriptor]]:
    """Greedy reduction; returns the result and the moves applied.

    Removing moves are applied first-come in sorted order.  When stuck,
    breadth-first sequences of at most ``r3_depth`` R3 moves are explored
    deterministically, looking for a position where a removing move
    opens up; the first such sequence is committed.  Every applied move,
    R3 included, counts against the budget.
    """
    applied: List[MoveDescriptor] = []
    cur = d
    while budget > 0:
        removals = enumerate_moves(cur, kinds=("R1", "R2"), directions=("remove",))
        if removals:
            mv = removals[0]
            cur = apply_reidemeister(cur, mv[0], mv[2], mv[1])
            applied.append(mv)
            budget -= 1
            continue
        if not cur.crossings or r3_depth <= 0:
            break
        path = _r3_search(cur, min(r3_depth, budget - 1))
        if not path:
            break
        for mv in path:
            cur = apply_reidemeister(cur, mv[0], mv[2], mv[1])
            applied.append(mv)
            budget -= 1
    return cur, applied


def _r3_search(d: PlanarDiagram, depth: int) -> Optional[List[MoveDescriptor]]:
    """Shortest R3 sequence (within depth) enabling an R1/R2 removal."""
    if depth <= 0:
        return None
    seen = {canonical_form(d)}
    frontier: List[Tuple[PlanarDiagram, List[MoveDescriptor]]] = [(d, [])]
    for _ in range(depth):
        nxt: List[Tuple[PlanarDiagram, List[MoveDescriptor]]] = []
        for cur, path in frontier:
            for mv in enumerate_moves(cur, kinds=("R3",)):
                try:
                    cand = apply_reidemeister(cur, mv[0], mv[2], mv[1])
                except MoveError:
                    continue
                key = canonical_form(cand)
                if key in seen:
                    continue
                seen.add(key)
                new_path = path + [mv]
                if enumerate_moves(cand, kinds=("R1", "R2"), directions=("remove",)):
                    return new_path
                nxt.append((cand, new_path))
        frontier = nxt
        if not frontier:
            return None
    return None


def simplify(d: PlanarDiagram, budget: int = 10000, r3_depth: int = 2) -> PlanarDiagram:
    """Deterministic greedy R1/R2 reduction with bounded R3 exploration."""
    out, _ = simplify_with_trace(d, budget, r3_depth)
    return out
