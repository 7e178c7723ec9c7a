"""Batch invariant reports over the cycles of an embedded complete graph.

Every cycle of K_n is extracted from the twisted embedding Gamma_2 as a knot
diagram, greedily simplified, and handed to the exact invariant suite.  Rows
are produced in canonical cycle order so the CSV and JSON artifacts are byte
for byte reproducible; wall-clock timings live in a single `timing` subtree
of the JSON and are the only nondeterministic content.
"""

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from time import perf_counter
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .alexander import alexander
from .bracket import jones_in_t
from .construction import (
    LiftedEmbedding,
    TwistedEmbedding,
    decompose_cycle,
    extract_cycle_knot,
)
from .conway import conway_a2
from .diagrams import validate
from .errors import ConstructionError, DiagramError
from .graphs import Cycle, complete_graph, enumerate_cycles
from .moves import simplify

SCHEMA_VERSION = "hkf-report/1"
DEFAULT_BUDGET = 10000

CSV_COLUMNS = (
    "cycle",
    "length",
    "forms-multiset",
    "crossings_raw",
    "crossings_simplified",
    "jones",
    "alexander",
    "a2",
    "verdict",
)


def cycle_name(kappa: Cycle) -> str:
    return "-".join(str(v) for v in kappa)


def poly_text(poly: Mapping[int, int]) -> str:
    """Sorted exponent:coefficient pairs, space separated; 0 for the zero
    polynomial."""
    if not poly:
        return "0"
    return " ".join("%d:%d" % (e, poly[e]) for e in sorted(poly))


@dataclass(frozen=True)
class CycleRow:
    """Everything the report knows about one cycle."""

    cycle: Cycle
    forms: Tuple[str, ...]
    crossings_raw: int
    crossings_simplified: int
    jones: Mapping[int, int]
    alexander: Mapping[int, int]
    a2: Optional[int]
    a2_note: str
    verdict: str
    evidence: str

    @property
    def forms_multiset(self) -> str:
        return "".join(sorted(self.forms))

    def csv_cells(self) -> Tuple[str, ...]:
        return (
            cycle_name(self.cycle),
            str(len(self.cycle)),
            self.forms_multiset,
            str(self.crossings_raw),
            str(self.crossings_simplified),
            poly_text(self.jones),
            poly_text(self.alexander),
            "overflow" if self.a2 is None else str(self.a2),
            self.verdict,
        )

    def as_json(self) -> Dict:
        return {
            "cycle": list(self.cycle),
            "length": len(self.cycle),
            "forms": list(self.forms),
            "crossings_raw": self.crossings_raw,
            "crossings_simplified": self.crossings_simplified,
            "jones": {str(e): c for e, c in sorted(self.jones.items())},
            "alexander": {str(e): c for e, c in sorted(self.alexander.items())},
            "a2": self.a2,
            "a2_note": self.a2_note,
            "verdict": {"status": self.verdict, "evidence": self.evidence},
        }


@dataclass(frozen=True)
class RunReport:
    version: str
    params: Mapping[str, int]
    budget: int
    rows: Tuple[CycleRow, ...]
    timing: Mapping[str, object]


def _row_from_json(obj: Mapping) -> CycleRow:
    return CycleRow(
        cycle=tuple(obj["cycle"]),
        forms=tuple(obj["forms"]),
        crossings_raw=obj["crossings_raw"],
        crossings_simplified=obj["crossings_simplified"],
        jones={int(e): c for e, c in obj["jones"].items()},
        alexander={int(e): c for e, c in obj["alexander"].items()},
        a2=obj["a2"],
        a2_note=obj["a2_note"],
        verdict=obj["verdict"]["status"],
        evidence=obj["verdict"]["evidence"],
    )


def compute_cycle_row(
    gamma1: LiftedEmbedding,
    gamma2: TwistedEmbedding,
    kappa: Cycle,
    budget: int = DEFAULT_BUDGET,
) -> CycleRow:
    """Extract, simplify and evaluate one cycle.

    The verdict ladder mirrors unknot_verdict on the already simplified
    diagram: zero crossings certify the unknot, a nonunit Jones or Alexander
    polynomial certifies a nontrivial knot, anything else stays unknown.
    """
    dec = decompose_cycle(gamma1, kappa)
    forms = tuple(ad.form for ad in dec.per_annulus)
    raw = extract_cycle_knot(gamma2, kappa)
    problems = validate(raw)
    if problems:
        raise ConstructionError(
            "invalid-composition: cycle %s extract fails validation: %s"
            % (cycle_name(kappa), problems[0])
        )
    simp = simplify(raw, budget=budget, r3_depth=0)
    jones = jones_in_t(simp)
    alex = alexander(simp)
    try:
        a2: Optional[int] = conway_a2(simp)
        a2_note = ""
    except DiagramError as exc:
        a2 = None
        a2_note = str(exc)
    if not simp.crossings:
        verdict, evidence = "unknot", "simplified-to-zero-crossings"
    elif jones != {0: 1}:
        verdict, evidence = "nontrivial", "nontrivial-jones"
    elif alex != {0: 1}:
        verdict, evidence = "nontrivial", "nontrivial-alexander"
    else:
        verdict, evidence = "unknown", "inconclusive"
    return CycleRow(
        cycle=kappa,
        forms=forms,
        crossings_raw=len(raw.crossings),
        crossings_simplified=len(simp.crossings),
        jones=jones,
        alexander=alex,
        a2=a2,
        a2_note=a2_note,
        verdict=verdict,
        evidence=evidence,
    )


_POOL_STATE: Dict[str, object] = {}


def _pool_init(gamma1, gamma2, budget) -> None:
    _POOL_STATE["g1"] = gamma1
    _POOL_STATE["g2"] = gamma2
    _POOL_STATE["budget"] = budget


def _pool_row(kappa: Cycle) -> Tuple[CycleRow, float]:
    t0 = perf_counter()
    row = compute_cycle_row(
        _POOL_STATE["g1"], _POOL_STATE["g2"], kappa, _POOL_STATE["budget"]
    )
    return row, perf_counter() - t0


def _cache_path(cache_dir, params: Mapping[str, int], budget: int, kappa: Cycle) -> Path:
    tag = json.dumps(
        [SCHEMA_VERSION, params["n"], params["r"], params["q"], budget, list(kappa)]
    )
    digest = hashlib.sha256(tag.encode()).hexdigest()[:24]
    return Path(cache_dir) / ("row-%s.json" % digest)


def build_report(
    gamma1: LiftedEmbedding,
    gamma2: TwistedEmbedding,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    cache_dir=None,
    progress: Optional[Callable[[str], None]] = None,
) -> RunReport:
    """Evaluate every cycle of K_n and assemble the run report.

    Per-cycle work is independent; with jobs > 1 it is farmed out to a
    process pool and reassembled in canonical order regardless of completion
    order.  A cache directory, when given, persists finished rows keyed by
    (schema, params, budget, cycle) so reruns skip the heavy invariants.
    """
    t0 = perf_counter()
    p = gamma2.params
    params = {"n": p.n, "r": p.r, "q": p.q}
    cycles = sorted(enumerate_cycles(complete_graph(p.n)))

    rows: Dict[Cycle, CycleRow] = {}
    timings: Dict[str, float] = {}
    todo: List[Cycle] = []
    for kappa in cycles:
        if cache_dir is not None:
            path = _cache_path(cache_dir, params, budget, kappa)
            if path.exists():
                rows[kappa] = _row_from_json(json.loads(path.read_text()))
                timings[cycle_name(kappa)] = 0.0
                if progress is not None:
                    progress("cycle %s: cached" % cycle_name(kappa))
                continue
        todo.append(kappa)

    def note(kappa: Cycle, row: CycleRow, dt: float) -> None:
        rows[kappa] = row
        timings[cycle_name(kappa)] = round(dt, 3)
        if cache_dir is not None:
            path = _cache_path(cache_dir, params, budget, kappa)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(row.as_json(), sort_keys=True))
        if progress is not None:
            progress(
                "cycle %s: %d -> %d crossings, %s, %.1fs"
                % (
                    cycle_name(kappa),
                    row.crossings_raw,
                    row.crossings_simplified,
                    row.verdict,
                    dt,
                )
            )

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_pool_init,
            initargs=(gamma1, gamma2, budget),
        ) as pool:
            for kappa, (row, dt) in zip(todo, pool.map(_pool_row, todo)):
                note(kappa, row, dt)
    else:
        for kappa in todo:
            t_k = perf_counter()
            row = compute_cycle_row(gamma1, gamma2, kappa, budget)
            note(kappa, row, perf_counter() - t_k)

    timing = {
        "total_s": round(perf_counter() - t0, 3),
        "cycles": timings,
    }
    ordered = tuple(rows[kappa] for kappa in cycles)
    return RunReport(SCHEMA_VERSION, params, budget, ordered, timing)


def report_csv(report: RunReport) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in report.rows:
        lines.append(",".join(row.csv_cells()))
    return "\n".join(lines) + "\n"


def report_json(report: RunReport) -> str:
    obj = {
        "version": report.version,
        "params": dict(report.params),
        "budget": report.budget,
        "cycles": [row.as_json() for row in report.rows],
        "timing": dict(report.timing),
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
