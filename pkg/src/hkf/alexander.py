"""Alexander polynomial of a knot via Wirtinger presentation and Fox calculus.

The diagram's arcs fall into Wirtinger generators by merging the two
over-strand arcs at every crossing.  Each crossing contributes one
relation; Fox differentiation and abelianization t of each relation give
an integer Laurent row, scaled by a unit so both crossing signs share
the (1 - t) entry on the over generator:

    over strand      1 - t
    under, positive  t on the incoming arc, -1 on the outgoing
    under, negative  -1 on the incoming arc, t on the outgoing

Dropping the last row and column of the resulting n x n matrix leaves a
minor whose determinant is the Alexander polynomial up to a unit; the
result is normalized to the symmetric representative with value 1 at
t = 1.
"""

from typing import Dict, List

from .diagrams import PlanarDiagram
from .errors import DiagramError
from .laurent import (
    Laurent,
    ladd,
    ldivmod_exact,
    leval_int,
    lmul,
    lneg,
    lone,
    lsub,
    ltrim,
    lzero,
)

_OVER = {0: 1, 1: -1}  # 1 - t


def _require_knot(d: PlanarDiagram) -> None:
    if d.vertices:
        raise DiagramError("diagram has graph vertices; not a knot")
    if len(d.components) != 1:
        raise DiagramError("diagram has %d components; not a knot" % len(d.components))


def _generator_classes(d: PlanarDiagram) -> Dict[int, int]:
    """Map each arc onto its Wirtinger generator index."""
    parent: Dict[int, int] = {a: a for a in d.arcs}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.crossings:
        ra, rb = find(x[1]), find(x[3])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    reps = sorted({find(a) for a in d.arcs})
    index = {r: i for i, r in enumerate(reps)}
    return {a: index[find(a)] for a in d.arcs}


def fox_matrix(d: PlanarDiagram) -> List[List[Laurent]]:
    """The n x n Fox derivative matrix of the Wirtinger presentation."""
    _require_knot(d)
    cls = _generator_classes(d)
    n = len(d.crossings)
    if len(set(cls.values())) != n:
        raise DiagramError("generator count does not match crossing count")
    signs = d.trace.signs
    rows: List[List[Laurent]] = []
    for i, x in enumerate(d.crossings):
        row: List[Laurent] = [lzero() for _ in range(n)]

        def put(col: int, val: Laurent) -> None:
            row[col] = ladd(row[col], val)

        put(cls[x[1]], _OVER)
        if signs[i] == 1:
            put(cls[x[0]], {1: 1})
            put(cls[x[2]], {0: -1})
        else:
            put(cls[x[0]], {0: -1})
            put(cls[x[2]], {1: 1})
        rows.append(row)
    return rows


def _det_bareiss(m: List[List[Laurent]]) -> Laurent:
    """Fraction-free determinant; divisions are exact over the Laurent ring."""
    k = len(m)
    if k == 0:
        return lone()
    m = [[dict(e) for e in row] for row in m]
    sign = 1
    prev = lone()
    for c in range(k):
        pivot_row = next((r for r in range(c, k) if ltrim(m[r][c])), None)
        if pivot_row is None:
            return lzero()
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        piv = m[c][c]
        for r in range(c + 1, k):
            for c2 in range(c + 1, k):
                num = lsub(lmul(piv, m[r][c2]), lmul(m[r][c], m[c][c2]))
                m[r][c2] = ldivmod_exact(num, prev) if num else {}
            m[r][c] = {}
        prev = piv
    det = m[k - 1][k - 1]
    return det if sign == 1 else lneg(det)


def _det_cofactor(m: List[List[Laurent]]) -> Laurent:
    k = len(m)
    if k == 0:
        return lone()
    if k == 1:
        return dict(m[0][0])
    total = lzero()
    for j in range(k):
        entry = ltrim(m[0][j])
        if not entry:
            continue
        minor = [[row[jj] for jj in range(k) if jj != j] for row in m[1:]]
        term = lmul(entry, _det_cofactor(minor))
        total = ladd(total, term) if j % 2 == 0 else lsub(total, term)
    return total


def _normalize(det: Laurent) -> Laurent:
    p = ltrim(det)
    if not p:
        raise DiagramError("Alexander determinant vanished")
    lo, hi = min(p), max(p)
    if (lo + hi) % 2:
        raise DiagramError("Alexander determinant cannot be symmetrized")
    shift = -(lo + hi) // 2
    sym = {e + shift: c for e, c in p.items()}
    if any(sym.get(-e) != c for e, c in sym.items()):
        raise DiagramError("Alexander determinant is not palindromic")
    at_one = leval_int(sym, 1)
    if at_one == 1:
        return sym
    if at_one == -1:
        return lneg(sym)
    raise DiagramError("Alexander value at t=1 is %d, expected a unit" % at_one)


def _minor(d: PlanarDiagram) -> List[List[Laurent]]:
    m = fox_matrix(d)
    return [row[:-1] for row in m[:-1]]


def alexander(d: PlanarDiagram) -> Laurent:
    """Normalized Alexander polynomial of a knot diagram.

    Satisfies alexander(t) = alexander(1/t) and value 1 at t = 1; the
    unknot gives the constant 1.
    """
    _require_knot(d)
    if not d.crossings:
        return lone()
    return _normalize(_det_bareiss(_minor(d)))


def alexander_naive(d: PlanarDiagram) -> Laurent:
    """Same invariant with the determinant by cofactor expansion."""
    _require_knot(d)
    if not d.crossings:
        return lone()
    return _normalize(_det_cofactor(_minor(d)))
