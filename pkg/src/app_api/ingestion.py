"""
JSON exchange formats for diagrams and fiberwise Morse data. Every schema violation raises
IngestionError naming the source and the offending field path.
"""

from __future__ import annotations

import json
import logging
import pathlib
from fractions import Fraction
from typing import Any, Union

from src.knot_algebra.coefficients.laurent import LaurentPoly, parse_rational, rational_to_str
from src.knot_algebra.diagrams.colorings import PolyColoredDiagram
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram, Edge, parse_half_edge_id
from src.knot_algebra.exceptions import CoefficientArithmeticError, IngestionError
from src.knot_algebra.morse.data import CriticalLocus, FiberwiseMorseData, OneOneEvent


logger = logging.getLogger("knotforge_logger")

SCHEMA_VERSION = 1
EDGE_KINDS = ("W", "I", "rho")


def _get(source: dict, key: str, kind: Union[type, tuple], origin: str, path: str) -> Any:
    where = f"{path}.{key}" if path else key
    if not isinstance(source, dict):
        raise IngestionError("expected an object", origin, path or "<root>")
    if key not in source:
        raise IngestionError("missing field", origin, where)
    value = source[key]
    if isinstance(value, bool) and kind is not bool:
        raise IngestionError(f"expected {_kind_name(kind)}, got a boolean", origin, where)
    if not isinstance(value, kind):
        raise IngestionError(f"expected {_kind_name(kind)}, got {type(value).__name__}", origin, where)
    return value


def _kind_name(kind: Union[type, tuple]) -> str:
    if isinstance(kind, tuple):
        return " or ".join(k.__name__ for k in kind)
    return kind.__name__


def _check_version(source: dict, origin: str) -> None:
    version = source.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise IngestionError(
            f"unsupported schema_version {version!r} (this build reads {SCHEMA_VERSION})",
            origin,
            "schema_version",
        )


def _rational(text: Any, origin: str, where: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, TypeError, CoefficientArithmeticError) as e:
        raise IngestionError(str(e), origin, where)


def _color(source: Any, origin: str, where: str) -> LaurentPoly:
    if not isinstance(source, dict) or not source:
        raise IngestionError("a color is a non-empty map exponent -> \"p/q\"", origin, where)
    terms = {}
    for exponent, coeff in source.items():
        try:
            e = int(exponent)
        except ValueError:
            raise IngestionError(f"exponent {exponent!r} is not an integer", origin, f"{where}.{exponent}")
        terms[e] = _rational(coeff, origin, f"{where}.{exponent}")
    return LaurentPoly(terms)


def read_json(path: Union[str, pathlib.Path]) -> Any:
    path = pathlib.Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise IngestionError(f"cannot read file: {e.strerror}", str(path))
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise IngestionError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", str(path))


def parse_diagram(
    source: Any, origin: str = "<input>", allow_poly: bool = False
) -> Union[ColoredJacobiDiagram, PolyColoredDiagram]:
    """
    Reads the diagram exchange format. Non-Wilson edges are numbered e0, e1, ... in file order;
    Wilson edges may come in any order but must be exactly the consecutive pairs of the cycle.
    Polynomial colors are accepted only with `allow_poly`, which returns a PolyColoredDiagram.
    """
    if not isinstance(source, dict):
        raise IngestionError("a diagram is a JSON object", origin)
    _check_version(source, origin)
    cycle = _get(source, "wilson_cycle", list, origin, "")
    for i, v in enumerate(cycle):
        if isinstance(v, bool) or not isinstance(v, int):
            raise IngestionError("vertex ids are integers", origin, f"wilson_cycle[{i}]")
    if not cycle:
        raise IngestionError("the Wilson cycle is empty", origin, "wilson_cycle")

    m = len(cycle)
    expected_w = {(cycle[i], cycle[(i + 1) % m]): i for i in range(m)}
    wilson: dict[int, LaurentPoly] = {}
    others: list[tuple[int, int, LaurentPoly]] = []
    for k, entry in enumerate(_get(source, "edges", list, origin, "")):
        where = f"edges[{k}]"
        tail = _get(entry, "from", int, origin, where)
        head = _get(entry, "to", int, origin, where)
        kind = _get(entry, "kind", str, origin, where)
        color = _color(entry.get("color"), origin, f"{where}.color")
        if kind not in EDGE_KINDS:
            raise IngestionError(f"kind must be one of {EDGE_KINDS}, got {kind!r}", origin, f"{where}.kind")
        if kind == "W":
            i = expected_w.get((tail, head))
            if i is None or i in wilson:
                raise IngestionError(
                    f"Wilson edge {tail} -> {head} is not a (new) consecutive pair of wilson_cycle",
                    origin,
                    where,
                )
            wilson[i] = color
        else:
            if (kind == "rho") != (tail == head):
                raise IngestionError(
                    f"kind {kind!r} does not match an edge {tail} -> {head}", origin, f"{where}.kind"
                )
            others.append((tail, head, color))
    if len(wilson) != m:
        missing = sorted(set(range(m)) - set(wilson))
        raise IngestionError(f"missing Wilson edges for cycle positions {missing}", origin, "edges")

    orientations = {}
    for vertex, half_edges in (source.get("vertex_orientations") or {}).items():
        where = f"vertex_orientations.{vertex}"
        if not isinstance(half_edges, list) or len(half_edges) != 3:
            raise IngestionError("a vertex orientation lists three half-edge ids", origin, where)
        try:
            orientations[int(vertex)] = tuple(parse_half_edge_id(h) for h in half_edges)
        except (ValueError, TypeError) as e:
            raise IngestionError(str(e), origin, where)

    wilson_colors = [wilson[i] for i in range(m)]
    edge_colors = [c for _, _, c in others]
    shape = ColoredJacobiDiagram.build(
        cycle, [0] * m, [Edge(t, h, 0) for t, h, _ in others], orientations
    )
    declared = source.get("degree")
    if declared is not None and declared != shape.degree:
        raise IngestionError(f"declared degree {declared}, but the diagram has degree {shape.degree}", origin, "degree")

    colored = PolyColoredDiagram(shape, tuple(wilson_colors), tuple(edge_colors))
    if colored.is_monomial:
        return colored.to_monomial()
    if not allow_poly:
        raise IngestionError("this command needs monomial colors {\"k\": \"1/1\"}", origin, "edges")
    return colored


def load_diagram(path: Union[str, pathlib.Path], allow_poly: bool = False):
    return parse_diagram(read_json(path), str(path), allow_poly)


def diagram_to_json(d: Union[ColoredJacobiDiagram, PolyColoredDiagram]) -> dict:
    return {"schema_version": SCHEMA_VERSION, **d.as_json()}


def parse_morse_data(source: Any, origin: str = "<input>") -> FiberwiseMorseData:
    """
    Reads the Morse-data exchange format and validates the result.
    """
    if not isinstance(source, dict):
        raise IngestionError("Morse data is a JSON object", origin)
    _check_version(source, origin)
    genus = _get(source, "fiber_genus", int, origin, "")
    loci = []
    for k, entry in enumerate(_get(source, "critical_loci", list, origin, "")):
        where = f"critical_loci[{k}]"
        loci.append(
            CriticalLocus(
                str(_get(entry, "id", (str, int), origin, where)),
                _get(entry, "index", int, origin, where),
                _get(entry, "period", int, origin, where),
                entry.get("sign", 1) if isinstance(entry, dict) else 1,
            )
        )
    events = []
    for k, entry in enumerate(source.get("one_one_events") or []):
        where = f"one_one_events[{k}]"
        events.append(
            OneOneEvent(
                str(entry.get("id", f"x{k}")) if isinstance(entry, dict) else f"x{k}",
                str(_get(entry, "from", (str, int), origin, where)),
                str(_get(entry, "to", (str, int), origin, where)),
                _rational(_get(entry, "base_angle", str, origin, where), origin, f"{where}.base_angle"),
                entry.get("sign", 1),
                entry.get("source_sheet", 0),
                entry.get("target_sheet", 0),
            )
        )
    monodromy = source.get("monodromy") or []
    if not isinstance(monodromy, list) or not all(
        isinstance(row, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in row)
        for row in monodromy
    ):
        raise IngestionError("the monodromy is a list of integer rows", origin, "monodromy")
    base_angle = _rational(source.get("base_fiber_angle", "0/1"), origin, "base_fiber_angle")
    data = FiberwiseMorseData(
        genus,
        tuple(loci),
        tuple(events),
        tuple(tuple(row) for row in monodromy),
        base_angle,
        name=pathlib.Path(origin).stem,
    )
    return data.validate()


def load_morse_data(path: Union[str, pathlib.Path]) -> FiberwiseMorseData:
    return parse_morse_data(read_json(path), str(path))


def morse_data_to_json(m: FiberwiseMorseData) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "fiber_genus": m.fiber_genus,
        "critical_loci": [
            {"id": c.id, "index": c.index, "period": c.period, "sign": c.sign} for c in m.critical_loci
        ],
        "one_one_events": [
            {
                "id": e.id,
                "from": e.source,
                "to": e.target,
                "base_angle": rational_to_str(e.base_angle),
                "sign": e.sign,
                "source_sheet": e.source_sheet,
                "target_sheet": e.target_sheet,
            }
            for e in m.one_one_events
        ],
        "monodromy": [list(row) for row in m.monodromy],
        "base_fiber_angle": rational_to_str(m.base_fiber_angle),
    }
