"""
Graph file format and DOT export.

    # comment
    6
    name 0 A
    0 2
    0 4

Line 1 (first non-comment line) is the vertex count; every other line is a
directed edge "u v" or a label line "name i LABEL".
"""

from typing import Dict, List, Optional, Tuple

from src.errors import GraphParseError, InputError
from src.graphs.side_info_graph import Graph


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def is_index(token: str) -> bool:
    """Non-negative decimal integer in ASCII digits"""
    return token.isascii() and token.isdigit()


def parse_graph(text: str) -> Graph:
    """Parse graph-file content; errors name the offending line"""
    n: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    names: Dict[int, str] = {}

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = strip_comment(raw)
        if not line:
            continue
        parts = line.split()

        if n is None:
            if len(parts) != 1 or not is_index(parts[0]):
                raise GraphParseError(f"expected vertex count, got {line!r}", line_no)
            n = int(parts[0])
            continue

        if parts[0] == "name":
            if len(parts) != 3 or not is_index(parts[1]):
                raise GraphParseError(f"malformed name line {line!r}", line_no)
            v = int(parts[1])
            if v >= n:
                raise GraphParseError(f"vertex {v} out of range for n={n}", line_no)
            names[v] = parts[2]
            continue

        if len(parts) != 2 or not all(is_index(p) for p in parts):
            raise GraphParseError(f"malformed edge line {line!r}", line_no)
        u, v = int(parts[0]), int(parts[1])
        if u >= n or v >= n:
            raise GraphParseError(f"vertex index out of range for n={n}: {line!r}", line_no)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", line_no)
        edges.append((u, v))

    if n is None:
        raise GraphParseError("missing vertex count header")

    labels = None
    if names:
        labels = tuple(names.get(v, str(v)) for v in range(n))
    return Graph.from_edges(n, edges, labels)


def serialize_graph(graph: Graph) -> str:
    """Canonical text: header, name lines, edges sorted by (u, v)"""
    lines = [str(graph.n)]
    if graph.labels:
        lines.extend(f"name {v} {label}" for v, label in enumerate(graph.labels))
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def read_graph_file(path) -> Graph:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_graph(handle.read())
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read graph file {path}: {exc}") from exc


def to_dot(graph: Graph, cover=None) -> str:
    """DOT digraph; covering sets become clusters when a cover is given"""
    lines = ["digraph side_information {"]
    if cover is not None:
        for i, cover_set in enumerate(cover.sets):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="k={cover_set.k} rho={cover_set.weight}";')
            lines.extend(f"    {v};" for v in cover_set.members)
            lines.append("  }")
    for v in graph.vertices:
        lines.append(f'  {v} [label="{graph.label(v)}"];')
    lines.extend(f"  {u} -> {v};" for u, v in graph.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
