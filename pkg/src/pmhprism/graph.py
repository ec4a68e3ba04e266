"""
Graph Core
Immutable labeled simple graphs, bitset edge sets, perfect matchings,
2-factors and their cycle decompositions.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from pmhprism.errors import (
    MalformedFactorError,
    MalformedInputError,
    UnsupportedDegreeError,
)

logger = logging.getLogger(__name__)

MAX_EDGES = 4096


class VertexRole(Enum):
    """Role tag of a vertex; the value is the name prefix."""

    OUTER = "u"
    INNER = "v"
    GENERIC = "x"


class EdgeClass(Enum):
    """Class tag of an edge."""

    OUTER_EDGE = "outer"
    INNER_EDGE = "inner"
    SPOKE = "spoke"
    GENERIC = "generic"


@dataclass(frozen=True)
class VertexLabel:
    """Vertex label such as u3 or v7 (1-based index)."""

    role: VertexRole
    i: int

    def __str__(self) -> str:
        return f"{self.role.value}{self.i}"

    @classmethod
    def parse(cls, token: str) -> "VertexLabel":
        """Parse ``u3`` / ``v12`` / ``x1``."""
        token = token.strip()
        if len(token) < 2 or not token[1:].isdigit():
            raise MalformedInputError(f"Malformed vertex label: {token!r}")
        prefix = token[0].lower()
        for role in VertexRole:
            if role.value == prefix:
                return cls(role, int(token[1:]))
        raise MalformedInputError(f"Unknown vertex role in label: {token!r}")


@dataclass(frozen=True)
class VertexId:
    """Dense vertex index paired with its label."""

    index: int
    label: VertexLabel


@dataclass(frozen=True)
class Edge:
    """Undirected edge; endpoints are stored with ``u < v``."""

    index: int
    u: int
    v: int
    edge_class: EdgeClass = EdgeClass.GENERIC

    @property
    def endpoints(self) -> Tuple[int, int]:
        return (self.u, self.v)

    def other(self, x: int) -> int:
        """Endpoint opposite to ``x``."""
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise MalformedInputError(f"Vertex {x} is not an endpoint of edge {self.index}")


@dataclass(frozen=True)
class EdgeSet:
    """
    Fixed-width bitset over edge indices.

    Two edge sets are equal iff their bitsets and widths are equal, which makes
    them usable as dictionary keys and canonical golden values.
    """

    bits: int
    width: int

    @classmethod
    def empty(cls, width: int) -> "EdgeSet":
        return cls(0, width)

    @classmethod
    def from_indices(cls, indices: Iterable[int], width: int) -> "EdgeSet":
        bits = 0
        for e in indices:
            if e < 0 or e >= width:
                raise MalformedInputError(
                    f"Edge index {e} out of range for graph with {width} edges"
                )
            bits |= 1 << e
        return cls(bits, width)

    def __contains__(self, e: object) -> bool:
        return isinstance(e, int) and 0 <= e < self.width and bool(self.bits >> e & 1)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def _check(self, other: "EdgeSet") -> None:
        if self.width != other.width:
            raise MalformedInputError(
                f"Edge sets of different graphs ({self.width} vs {other.width} edges)"
            )

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        self._check(other)
        return EdgeSet(self.bits | other.bits, self.width)

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        self._check(other)
        return EdgeSet(self.bits & other.bits, self.width)

    def __sub__(self, other: "EdgeSet") -> "EdgeSet":
        self._check(other)
        return EdgeSet(self.bits & ~other.bits, self.width)

    def isdisjoint(self, other: "EdgeSet") -> bool:
        self._check(other)
        return not self.bits & other.bits

    def issubset(self, other: "EdgeSet") -> bool:
        self._check(other)
        return not self.bits & ~other.bits

    def indices(self) -> Tuple[int, ...]:
        return tuple(self)


@dataclass(frozen=True)
class PerfectMatching:
    """Edge set covering every vertex exactly once (validated by the producer)."""

    edges: EdgeSet

    def __contains__(self, e: object) -> bool:
        return e in self.edges

    def __iter__(self) -> Iterator[int]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Cycle:
    """Vertex cycle starting at its smallest vertex index."""

    vertices: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class TwoFactor:
    """2-regular spanning edge set together with its cycle decomposition."""

    edges: EdgeSet
    cycles: Tuple[Cycle, ...]

    @property
    def lengths(self) -> List[int]:
        return [c.length for c in self.cycles]

    @property
    def is_hamiltonian(self) -> bool:
        return len(self.cycles) == 1

    @property
    def has_odd_cycle(self) -> bool:
        return any(c.length % 2 for c in self.cycles)


class Graph:
    """
    Immutable simple graph with role-tagged vertices and class-tagged edges.

    Edge indices follow the order of the ``edges`` argument; family builders
    rely on that to keep edge sets reproducible across runs.
    """

    def __init__(
        self,
        labels: Sequence[VertexLabel],
        edges: Sequence[Tuple[int, int, EdgeClass]],
        name: str = "",
    ):
        if len(edges) > MAX_EDGES:
            raise MalformedInputError(
                f"Graph has {len(edges)} edges; at most {MAX_EDGES} are supported"
            )
        self.name = name
        self._vertices = tuple(VertexId(i, lab) for i, lab in enumerate(labels))
        self._by_label: Dict[VertexLabel, int] = {}
        for vid in self._vertices:
            if vid.label in self._by_label:
                raise MalformedInputError(f"Duplicate vertex label {vid.label}")
            self._by_label[vid.label] = vid.index

        order = len(self._vertices)
        built: List[Edge] = []
        pairs: Dict[Tuple[int, int], int] = {}
        incident: List[List[int]] = [[] for _ in range(order)]
        for index, (x, y, edge_class) in enumerate(edges):
            if not (0 <= x < order and 0 <= y < order):
                raise MalformedInputError(f"Edge {index} has an endpoint out of range")
            if x == y:
                raise MalformedInputError(f"Edge {index} is a loop at vertex {x}")
            key = (min(x, y), max(x, y))
            if key in pairs:
                raise MalformedInputError(
                    f"Edges {pairs[key]} and {index} join the same pair {key}"
                )
            pairs[key] = index
            built.append(Edge(index, key[0], key[1], edge_class))
            incident[x].append(index)
            incident[y].append(index)

        self._edges = tuple(built)
        self._pairs = pairs
        self._incident = tuple(tuple(sorted(lst)) for lst in incident)
        if not self.is_connected():
            raise MalformedInputError(f"Graph {name!r} is not connected")

    # -- structure -------------------------------------------------------

    @property
    def vertices(self) -> Tuple[VertexId, ...]:
        return self._vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def order(self) -> int:
        return len(self._vertices)

    @property
    def size(self) -> int:
        return len(self._edges)

    def incident(self, x: int) -> Tuple[int, ...]:
        """Incident edge indices of ``x`` in ascending order."""
        return self._incident[x]

    def degree(self, x: int) -> int:
        return len(self._incident[x])

    def neighbors(self, x: int) -> List[int]:
        return [self._edges[e].other(x) for e in self._incident[x]]

    def is_cubic(self) -> bool:
        return all(len(inc) == 3 for inc in self._incident)

    def is_connected(self) -> bool:
        if not self._vertices:
            return True
        return nx.is_connected(self.to_networkx())

    def girth(self) -> Optional[int]:
        """Length of a shortest cycle, or None for a forest."""
        girth = nx.girth(self.to_networkx())
        return None if girth == float("inf") else int(girth)

    def edge_between(self, x: int, y: int) -> Optional[int]:
        return self._pairs.get((min(x, y), max(x, y)))

    def require_edge(self, x: int, y: int) -> int:
        e = self.edge_between(x, y)
        if e is None:
            raise MalformedInputError(
                f"No edge between {self.label_of(x)} and {self.label_of(y)}"
            )
        return e

    # -- labels ----------------------------------------------------------

    def vertex(self, label: VertexLabel) -> int:
        try:
            return self._by_label[label]
        except KeyError:
            raise MalformedInputError(f"Unknown vertex {label}") from None

    def label_of(self, x: int) -> str:
        return str(self._vertices[x].label)

    def edge_name(self, e: int) -> str:
        edge = self._edges[e]
        return f"{self.label_of(edge.u)}-{self.label_of(edge.v)}"

    def edge_names(self, es: Iterable[int]) -> List[str]:
        return [self.edge_name(e) for e in es]

    # -- edge sets -------------------------------------------------------

    def edge_set(self, indices: Iterable[int]) -> EdgeSet:
        return EdgeSet.from_indices(indices, self.size)

    def full_edge_set(self) -> EdgeSet:
        return EdgeSet((1 << self.size) - 1, self.size)

    def edges_of_class(self, edge_class: EdgeClass) -> EdgeSet:
        return self.edge_set(e.index for e in self._edges if e.edge_class is edge_class)

    # -- networkx adapters -------------------------------------------------

    @classmethod
    def from_networkx(cls, nxg: "nx.Graph", name: str = "") -> "Graph":
        """Build a generic graph from a networkx graph, nodes in iteration order."""
        nodes = list(nxg.nodes)
        position = {node: i for i, node in enumerate(nodes)}
        labels = [VertexLabel(VertexRole.GENERIC, i + 1) for i in range(len(nodes))]
        pairs = sorted(
            (min(position[a], position[b]), max(position[a], position[b]))
            for a, b in nxg.edges
        )
        return cls(labels, [(x, y, EdgeClass.GENERIC) for x, y in pairs], name=name)

    def to_networkx(self, edges: Optional[EdgeSet] = None) -> "nx.Graph":
        """Export to networkx, optionally restricted to an edge subset."""
        nxg = nx.Graph(name=self.name)
        for vid in self._vertices:
            nxg.add_node(str(vid.label), index=vid.index)
        chosen = self._edges if edges is None else [self._edges[e] for e in edges]
        for edge in chosen:
            nxg.add_edge(
                self.label_of(edge.u),
                self.label_of(edge.v),
                index=edge.index,
                edge_class=edge.edge_class.value,
            )
        return nxg

    def __repr__(self) -> str:
        return f"Graph(name={self.name!r}, order={self.order}, size={self.size})"


def _check_width(g: Graph, es: EdgeSet) -> None:
    if es.width != g.size:
        raise MalformedInputError(
            f"Edge set of width {es.width} does not belong to {g!r}"
        )
    if es.bits >> g.size:
        raise MalformedInputError("Edge set contains an out-of-range edge index")


def _degrees(g: Graph, es: EdgeSet) -> List[int]:
    deg = [0] * g.order
    for e in es:
        edge = g.edges[e]
        deg[edge.u] += 1
        deg[edge.v] += 1
    return deg


def validate_perfect_matching(g: Graph, m: EdgeSet) -> bool:
    """True iff every vertex of ``g`` is covered exactly once by ``m``."""
    _check_width(g, m)
    return all(d == 1 for d in _degrees(g, m))


def as_perfect_matching(g: Graph, m: EdgeSet) -> PerfectMatching:
    """Validate and wrap an edge set."""
    if not validate_perfect_matching(g, m):
        raise MalformedInputError(
            f"Edge set {g.edge_names(m)} is not a perfect matching of {g.name or g!r}"
        )
    return PerfectMatching(m)


def cycle_decomposition(g: Graph, f: EdgeSet) -> Tuple[Cycle, ...]:
    """
    Split a 2-regular spanning edge set into its cycles.

    Each cycle starts at its smallest vertex and leaves it along the incident
    member edge of smaller index; cycles are sorted by (length, smallest vertex).
    """
    _check_width(g, f)
    if any(d != 2 for d in _degrees(g, f)):
        raise MalformedFactorError("Edge set is not 2-regular and spanning")

    seen = [False] * g.order
    cycles: List[Cycle] = []
    for start in range(g.order):
        if seen[start]:
            continue
        walk = [start]
        seen[start] = True
        prev_edge = -1
        x = start
        while True:
            nxt = next(e for e in g.incident(x) if e in f and e != prev_edge)
            y = g.edges[nxt].other(x)
            if y == start:
                break
            seen[y] = True
            walk.append(y)
            prev_edge, x = nxt, y
        cycles.append(Cycle(tuple(walk)))

    cycles.sort(key=lambda c: (c.length, c.vertices[0]))
    return tuple(cycles)


def cycle_edges(g: Graph, cycle: Cycle) -> List[int]:
    """Edge indices of a cycle in traversal order."""
    vs = cycle.vertices
    return [g.require_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def complement_two_factor(g: Graph, m: PerfectMatching) -> TwoFactor:
    """E(g) minus a perfect matching of a cubic graph, with its cycles."""
    if not g.is_cubic():
        raise UnsupportedDegreeError(
            f"{g.name or 'graph'} is not cubic; a matching complement is no 2-factor"
        )
    if not validate_perfect_matching(g, m.edges):
        raise MalformedInputError("Complement requested for a non-perfect matching")
    rest = g.full_edge_set() - m.edges
    return TwoFactor(rest, cycle_decomposition(g, rest))


def is_hamiltonian_union(g: Graph, m: PerfectMatching, n: PerfectMatching) -> bool:
    """True iff ``m`` and ``n`` are disjoint and their union is one spanning cycle."""
    for pm in (m, n):
        if not validate_perfect_matching(g, pm.edges):
            raise MalformedInputError("Hamiltonicity test needs two perfect matchings")
    if not m.edges.isdisjoint(n.edges):
        return False
    cycles = cycle_decomposition(g, m.edges | n.edges)
    return len(cycles) == 1 and cycles[0].length == g.order
