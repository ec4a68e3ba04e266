"""
Graph Families
Prism and crossed prism builders with their structural vocabulary: the
principal 4-edge-cut, C4-poles, 2-chains and the chain symmetry classes.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple, Union

import networkx as nx

from pmhprism.errors import (
    ErrorContext,
    InvalidParameterError,
    MalformedFactorError,
    UndefinedClassificationError,
    UnsupportedParameterError,
    UsageError,
)
from pmhprism.graph import (
    EdgeClass,
    EdgeSet,
    Graph,
    PerfectMatching,
    VertexLabel,
    VertexRole,
    cycle_decomposition,
)

logger = logging.getLogger(__name__)

PRISM = "prism"
CROSSED_PRISM = "crossed-prism"
FIXTURES = ("k4", "k33", "petersen", "c4")
FAMILIES = (PRISM, CROSSED_PRISM) + FIXTURES

SEMIEDGE_SLOTS = ("e1", "e2", "e3", "e4")
CUT_NAMES = ("a", "b", "c", "d")


class ChainSide(Enum):
    """Right chain holds T_1..T_n, left chain holds T_{n+1}..T_{2n}."""

    RIGHT = "right"
    LEFT = "left"


class SymmetryClass(Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


class PoleType(Enum):
    """How a pole is matched internally when the matching avoids its semiedges."""

    SPOKES = "spokes"
    PARALLELS = "parallels"


def _outer(i: int) -> VertexLabel:
    return VertexLabel(VertexRole.OUTER, i)


def _inner(i: int) -> VertexLabel:
    return VertexLabel(VertexRole.INNER, i)


@dataclass(frozen=True)
class PrismGraph:
    """P_n: outer cycle u1..un, inner cycle v1..vn, spokes u_i v_i."""

    n: int
    graph: Graph

    @property
    def name(self) -> str:
        return self.graph.name

    def u(self, i: int) -> int:
        """Vertex index of u_i, cyclic in 1..n."""
        return (i - 1) % self.n

    def v(self, i: int) -> int:
        return self.n + (i - 1) % self.n

    def spoke(self, i: int) -> int:
        return self.graph.require_edge(self.u(i), self.v(i))

    def outer_edge(self, i: int) -> int:
        """Edge u_i u_{i+1}."""
        return self.graph.require_edge(self.u(i), self.u(i + 1))

    def inner_edge(self, i: int) -> int:
        """Edge v_i v_{i+1}."""
        return self.graph.require_edge(self.v(i), self.v(i + 1))

    def spokes(self) -> EdgeSet:
        return self.graph.edges_of_class(EdgeClass.SPOKE)


@dataclass(frozen=True)
class PrincipalCut:
    """The four edges a, b, c, d separating the right and left chains."""

    a: int
    b: int
    c: int
    d: int

    def as_dict(self) -> Dict[str, int]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


@dataclass(frozen=True)
class C4PoleView:
    """
    The pole T_j = {u_{2j-1}, u_{2j}, v_{2j-1}, v_{2j}}.

    Semiedge slots: e1 at u_{2j-1} (upper left), e2 at u_{2j} (upper right),
    e3 at v_{2j} (lower left), e4 at v_{2j-1} (lower right). With this labelling
    e2 of T_j and e1 of T_{j+1} are the same edge, as are e4 of T_j and e3 of
    T_{j+1}.
    """

    j: int
    vertices: Tuple[int, int, int, int]
    internal_edges: Tuple[int, int, int, int]
    semiedges: Tuple[int, int, int, int]
    spoke_pair: Tuple[int, int]
    parallel_pair: Tuple[int, int]

    def delta(self, width: int) -> EdgeSet:
        return EdgeSet.from_indices(self.semiedges, width)

    def internal(self, width: int) -> EdgeSet:
        return EdgeSet.from_indices(self.internal_edges, width)


@dataclass(frozen=True)
class CrossedPrismGraph:
    """CP_n on 8n vertices with its principal 4-edge-cut."""

    n: int
    graph: Graph
    cut: PrincipalCut

    @property
    def name(self) -> str:
        return self.graph.name

    @property
    def poles(self) -> int:
        return 2 * self.n

    def u(self, i: int) -> int:
        """Vertex index of u_i, cyclic in 1..4n."""
        return (i - 1) % (4 * self.n)

    def v(self, i: int) -> int:
        return 4 * self.n + (i - 1) % (4 * self.n)

    def cut_set(self) -> EdgeSet:
        return self.graph.edge_set(self.cut.as_dict().values())

    def side_of(self, j: int) -> ChainSide:
        self._check_pole(j)
        return ChainSide.RIGHT if j <= self.n else ChainSide.LEFT

    def side_poles(self, side: ChainSide) -> List[int]:
        if side is ChainSide.RIGHT:
            return list(range(1, self.n + 1))
        return list(range(self.n + 1, 2 * self.n + 1))

    def two_chains(self, side: ChainSide) -> List[Tuple[int, int]]:
        """Disjoint consecutive pole pairs (T_1,T_2),(T_3,T_4),... of a side."""
        poles = self.side_poles(side)
        return [(poles[k], poles[k + 1]) for k in range(0, len(poles) - 1, 2)]

    def _check_pole(self, j: int) -> None:
        if not 1 <= j <= 2 * self.n:
            raise InvalidParameterError(
                f"Pole index {j} outside 1..{2 * self.n}",
                ErrorContext("c4_pole", CROSSED_PRISM, self.n),
            )


Family = Union[PrismGraph, CrossedPrismGraph]


def build_prism(n: int) -> PrismGraph:
    """Build P_n: outer edges first, then inner edges, then spokes."""
    if n < 3:
        raise InvalidParameterError(
            f"Prism needs n >= 3, got {n}", ErrorContext("build_prism", PRISM, n)
        )
    labels = [_outer(i) for i in range(1, n + 1)] + [_inner(i) for i in range(1, n + 1)]
    edges: List[Tuple[int, int, EdgeClass]] = []
    edges += [(i, (i + 1) % n, EdgeClass.OUTER_EDGE) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n, EdgeClass.INNER_EDGE) for i in range(n)]
    edges += [(i, n + i, EdgeClass.SPOKE) for i in range(n)]
    prism = PrismGraph(n, Graph(labels, edges, name=f"P_{n}"))
    logger.debug(f"Built {prism.name} with {prism.graph.size} edges")
    return prism


def build_crossed_prism(n: int) -> CrossedPrismGraph:
    """
    Build CP_n.

    Edge order: outer edges u_i u_{i+1}; inner edges v_{2i-1}v_{2i}, then
    v_{2i-1}v_{2i+2}, then v_{4n-1}v_2; spokes last.
    """
    if n < 1:
        raise InvalidParameterError(
            f"Crossed prism needs n >= 1, got {n}",
            ErrorContext("build_crossed_prism", CROSSED_PRISM, n),
        )
    size = 4 * n

    def u(i: int) -> int:
        return (i - 1) % size

    def v(i: int) -> int:
        return size + (i - 1) % size

    labels = [_outer(i) for i in range(1, size + 1)] + [
        _inner(i) for i in range(1, size + 1)
    ]
    edges: List[Tuple[int, int, EdgeClass]] = []
    edges += [(u(i), u(i + 1), EdgeClass.OUTER_EDGE) for i in range(1, size + 1)]
    inner = EdgeClass.INNER_EDGE
    edges += [(v(2 * i - 1), v(2 * i), inner) for i in range(1, 2 * n + 1)]
    edges += [(v(2 * i - 1), v(2 * i + 2), inner) for i in range(1, 2 * n)]
    edges.append((v(size - 1), v(2), inner))
    edges += [(u(i), v(i), EdgeClass.SPOKE) for i in range(1, size + 1)]
    graph = Graph(labels, edges, name=f"CP_{n}")

    cut = PrincipalCut(
        a=graph.require_edge(u(1), u(size)),
        b=graph.require_edge(v(2), v(size - 1)),
        c=graph.require_edge(v(2 * n - 1), v(2 * n + 2)),
        d=graph.require_edge(u(2 * n), u(2 * n + 1)),
    )
    cp = CrossedPrismGraph(n, graph, cut)

    rims = graph.full_edge_set() - graph.edges_of_class(EdgeClass.SPOKE)
    lengths = [c.length for c in cycle_decomposition(graph, rims)]
    if lengths != [size, size]:
        raise MalformedFactorError(f"{graph.name} rims decompose as {lengths}")
    logger.debug(f"Built {graph.name} with principal cut {cut.as_dict()}")
    return cp


def build_family(family: str, n: int) -> Family:
    """Dispatch on a CLI family name."""
    if family == PRISM:
        return build_prism(n)
    if family == CROSSED_PRISM:
        return build_crossed_prism(n)
    raise UsageError(
        f"Unknown family {family!r}; expected one of {PRISM}, {CROSSED_PRISM}"
    )


def build_fixture(name: str) -> Graph:
    """Small named cubic (or 2-regular) test graphs built through networkx."""
    builders = {
        "k4": lambda: nx.complete_graph(4),
        "k33": lambda: nx.complete_bipartite_graph(3, 3),
        "petersen": nx.petersen_graph,
        "c4": lambda: nx.cycle_graph(4),
    }
    if name not in builders:
        raise UsageError(
            f"Unknown fixture {name!r}; expected one of {', '.join(FIXTURES)}"
        )
    return Graph.from_networkx(builders[name](), name=name)


def build_graph(family: str, n: int = 0) -> Graph:
    """Graph for any family or fixture name; fixtures ignore ``n``."""
    if family in FIXTURES:
        return build_fixture(family)
    return build_family(family, n).graph


def c4_pole(cp: CrossedPrismGraph, j: int) -> C4PoleView:
    cp._check_pole(j)
    g = cp.graph
    ul, ur, vl, vr = cp.u(2 * j - 1), cp.u(2 * j), cp.v(2 * j), cp.v(2 * j - 1)
    members = {ul, ur, vl, vr}

    def external(x: int) -> int:
        return next(e for e in g.incident(x) if g.edges[e].other(x) not in members)

    return C4PoleView(
        j=j,
        vertices=(ul, ur, vr, vl),
        internal_edges=(
            g.require_edge(ul, ur),
            g.require_edge(ur, vl),
            g.require_edge(vl, vr),
            g.require_edge(vr, ul),
        ),
        semiedges=(external(ul), external(ur), external(vl), external(vr)),
        spoke_pair=(g.require_edge(ul, vr), g.require_edge(ur, vl)),
        parallel_pair=(g.require_edge(ul, ur), g.require_edge(vr, vl)),
    )


def cut_intersection(cp: CrossedPrismGraph, m: PerfectMatching) -> Tuple[str, ...]:
    """Names of the principal cut edges lying in ``m``, alphabetically."""
    return tuple(name for name, e in sorted(cp.cut.as_dict().items()) if e in m)


def pole_pattern(cp: CrossedPrismGraph, m: PerfectMatching, j: int) -> Tuple[str, ...]:
    """Semiedge slots of T_j that ``m`` contains, e.g. ("e1", "e4")."""
    pole = c4_pole(cp, j)
    return tuple(slot for slot, e in zip(SEMIEDGE_SLOTS, pole.semiedges) if e in m)


def pole_type(cp: CrossedPrismGraph, m: PerfectMatching, j: int) -> PoleType:
    pole = c4_pole(cp, j)
    if all(e in m for e in pole.spoke_pair):
        return PoleType.SPOKES
    if all(e in m for e in pole.parallel_pair):
        return PoleType.PARALLELS
    raise UndefinedClassificationError(
        f"T_{j} is not matched internally",
        ErrorContext("pole_type", CROSSED_PRISM, cp.n, {"pole": j}),
    )


def _require_cut_free(
    cp: CrossedPrismGraph, m: PerfectMatching, operation: str
) -> None:
    hit = cut_intersection(cp, m)
    if hit:
        raise UndefinedClassificationError(
            f"Matching meets the principal cut in {{{', '.join(hit)}}}",
            ErrorContext(operation, CROSSED_PRISM, cp.n),
        )


def classify_two_chain(
    cp: CrossedPrismGraph, m: PerfectMatching, j: int
) -> SymmetryClass:
    """Symmetric iff T_j and T_{j+1} are both spoke-matched or both parallel-matched."""
    if cp.n < 2:
        raise UnsupportedParameterError(
            "2-chains need n >= 2",
            ErrorContext("classify_two_chain", CROSSED_PRISM, cp.n),
        )
    if not 1 <= j < 2 * cp.n or cp.side_of(j) is not cp.side_of(j + 1):
        raise InvalidParameterError(
            f"T_{j} and T_{j + 1} do not form a 2-chain on one side",
            ErrorContext("classify_two_chain", CROSSED_PRISM, cp.n, {"pole": j}),
        )
    _require_cut_free(cp, m, "classify_two_chain")
    if pole_type(cp, m, j) is pole_type(cp, m, j + 1):
        return SymmetryClass.SYMMETRIC
    return SymmetryClass.ASYMMETRIC


def phi_product(cp: CrossedPrismGraph, m: PerfectMatching, side: ChainSide) -> int:
    """+1 for an even number of asymmetric 2-chains on ``side``, else -1."""
    if cp.n % 2:
        raise UnsupportedParameterError(
            f"Chain sides of CP_{cp.n} do not split into 2-chains (n odd)",
            ErrorContext("phi_product", CROSSED_PRISM, cp.n),
        )
    _require_cut_free(cp, m, "phi_product")
    phi = 1
    for j, _ in cp.two_chains(side):
        if classify_two_chain(cp, m, j) is SymmetryClass.ASYMMETRIC:
            phi = -phi
    return phi


def psi_automorphism(cp: CrossedPrismGraph) -> Dict[int, int]:
    """
    Inner/outer exchange: u_i -> v_s(i), v_i -> u_s(i), s swapping 2k-1 and 2k.

    Maps a to b and c to d, and fixes every pole setwise.
    """

    def sigma(i: int) -> int:
        return i + 1 if i % 2 else i - 1

    mapping: Dict[int, int] = {}
    for i in range(1, 4 * cp.n + 1):
        mapping[cp.u(i)] = cp.v(sigma(i))
        mapping[cp.v(i)] = cp.u(sigma(i))
    return mapping


def map_edge_set(g: Graph, mapping: Dict[int, int], es: EdgeSet) -> EdgeSet:
    """Image of an edge set under a vertex map; fails if an image is not an edge."""
    return g.edge_set(
        g.require_edge(mapping[g.edges[e].u], mapping[g.edges[e].v]) for e in es
    )
