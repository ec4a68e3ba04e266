"""
Text formats: DOT export and the vertex-label edge-list codec.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional

from pmhprism.errors import MalformedInputError, UsageError
from pmhprism.graph import EdgeSet, Graph, VertexLabel

logger = logging.getLogger(__name__)

CUT_COLOR = "red"


def to_dot(
    g: Graph,
    highlight: Optional[EdgeSet] = None,
    cut: Optional[EdgeSet] = None,
) -> str:
    """
    Undirected DOT text for ``g``.

    Highlighted edges get ``style=bold``, cut edges get ``color=red``. Nodes
    and edges are written in index order so the output is byte-stable.
    """
    name = (g.name or "G").replace('"', "")
    lines = [f'graph "{name}" {{']
    for vid in g.vertices:
        lines.append(f"    {vid.label};")
    for edge in g.edges:
        attrs: List[str] = []
        if highlight is not None and edge.index in highlight:
            attrs.append("style=bold")
        if cut is not None and edge.index in cut:
            attrs.append(f"color={CUT_COLOR}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"    {g.label_of(edge.u)} -- {g.label_of(edge.v)}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_edge_token(g: Graph, token: str) -> int:
    """Edge index for a token such as ``u3-v3`` (endpoint order is free)."""
    parts = token.split("-")
    if len(parts) != 2:
        raise UsageError(f"Malformed edge token {token!r}; expected e.g. u3-v3")
    try:
        x = g.vertex(VertexLabel.parse(parts[0]))
        y = g.vertex(VertexLabel.parse(parts[1]))
        return g.require_edge(x, y)
    except MalformedInputError as e:
        raise UsageError(f"Bad edge token {token!r}: {e}") from None


def parse_edge_list(g: Graph, text: str) -> EdgeSet:
    """
    Parse whitespace-separated edge tokens; ``@path`` reads them from a file.

    Repeated tokens are rejected so a typo cannot silently shrink a matching.
    """
    text = text.strip()
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"Cannot read edge list {path}: {e}") from None
    indices: List[int] = []
    for token in text.replace(",", " ").split():
        e = parse_edge_token(g, token)
        if e in indices:
            raise UsageError(f"Edge {token} listed twice")
        indices.append(e)
    return g.edge_set(indices)


def format_edge_list(g: Graph, es: Iterable[int]) -> str:
    return " ".join(g.edge_name(e) for e in es)
