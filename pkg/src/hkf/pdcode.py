"""Text format for planar diagrams.

One statement per line.  X(a,b,c,d) is a crossing in counterclockwise
order from the incoming under-strand, V(a1,...,ak) a graph vertex, and
L(name: a1,a2,...) a labeled component listing its arcs in traversal
order.  Blank lines are skipped and # starts a comment.  Writing then
reading then writing again reproduces the text byte for byte.
"""

import re
from typing import List, Tuple

from .diagrams import PlanarDiagram
from .errors import ParseError

_STMT = re.compile(r"^([XVL])\((.*)\)$")
_NAME = re.compile(r"^[A-Za-z0-9_.+-]+$")


def write_pd(d: PlanarDiagram) -> str:
    lines = []
    for x in d.crossings:
        lines.append("X(%s)" % ",".join(str(a) for a in x))
    for v in d.vertices:
        lines.append("V(%s)" % ",".join(str(a) for a in v))
    for label, comp in zip(d.labels, d.components):
        lines.append("L(%s: %s)" % (label, ",".join(str(a) for a in comp)))
    return "\n".join(lines) + "\n"


def _parse_arcs(body: str, lineno: int) -> Tuple[int, ...]:
    out = []
    for tok in body.split(","):
        tok = tok.strip()
        if not re.match(r"^[0-9]+$", tok):
            raise ParseError("line %d: bad arc label %r" % (lineno, tok))
        val = int(tok)
        if val <= 0:
            raise ParseError("line %d: arc labels are positive, got %d" % (lineno, val))
        out.append(val)
    return tuple(out)


def read_pd(text: str) -> PlanarDiagram:
    crossings: List[Tuple[int, ...]] = []
    vertices: List[Tuple[int, ...]] = []
    components: List[Tuple[int, ...]] = []
    labels: List[str] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _STMT.match(line)
        if not m:
            raise ParseError("line %d: expected X(...), V(...) or L(...)" % lineno)
        kind, body = m.group(1), m.group(2)
        if kind == "X":
            arcs = _parse_arcs(body, lineno)
            if len(arcs) != 4:
                raise ParseError("line %d: crossing needs 4 arcs, got %d" % (lineno, len(arcs)))
            crossings.append(arcs)
        elif kind == "V":
            arcs = _parse_arcs(body, lineno)
            if len(arcs) < 2:
                raise ParseError("line %d: vertex needs at least 2 arcs" % lineno)
            vertices.append(arcs)
        else:
            if ":" not in body:
                raise ParseError("line %d: component needs 'name: arcs'" % lineno)
            name, arcs_part = body.split(":", 1)
            name = name.strip()
            if not _NAME.match(name):
                raise ParseError("line %d: bad component name %r" % (lineno, name))
            if name in labels:
                raise ParseError("line %d: duplicate component name %r" % (lineno, name))
            components.append(_parse_arcs(arcs_part, lineno))
            labels.append(name)
    if not components:
        raise ParseError("line %d: no components in input" % (lineno if text else 0))
    return PlanarDiagram(
        tuple(crossings), tuple(vertices), tuple(components), tuple(labels)
    )


def read_pd_file(path) -> PlanarDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        return read_pd(fh.read())


def write_pd_file(path, d: PlanarDiagram) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_pd(d))
