"""
Constructions
Non-PMH witness matchings for prisms and odd crossed prisms, and the
case-split extension algorithm for crossed prisms. Every construction is
re-verified before it is returned.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Set, Tuple

from pmhprism.errors import (
    ErrorContext,
    InvalidParameterError,
    TheoremScopeError,
    WrongCaseError,
)
from pmhprism.families import (
    CROSSED_PRISM,
    PRISM,
    ChainSide,
    CrossedPrismGraph,
    PrismGraph,
    build_crossed_prism,
    build_prism,
    c4_pole,
    cut_intersection,
    phi_product,
)
from pmhprism.graph import (
    EdgeSet,
    PerfectMatching,
    TwoFactor,
    as_perfect_matching,
    cycle_decomposition,
    is_hamiltonian_union,
)
from pmhprism.matching import find_extension, two_factors_containing

logger = logging.getLogger(__name__)


class Subcase(Enum):
    """Which construction produced an extension."""

    CUT2_COMPLEMENTARY = "Cut2Complementary"
    CUT4_EXPLICIT = "Cut4Explicit"
    CUT0_BOTH_EVEN = "Cut0BothEven"
    CUT0_ONE_ODD = "Cut0OneOdd"
    FALLBACK_SEARCH = "FallbackSearch"


@dataclass(frozen=True)
class CaseTrace:
    """How an extension was obtained."""

    cut_size: int
    subcase: Subcase
    cut_edges: Tuple[str, ...] = ()
    phi_right: Optional[int] = None
    phi_left: Optional[int] = None
    attempted: Optional[Subcase] = None
    concatenation: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "cut_size": self.cut_size,
            "subcase": self.subcase.value,
            "cut_edges": list(self.cut_edges),
        }
        if self.cut_size == 0:
            data["phi_right"] = self.phi_right
            data["phi_left"] = self.phi_left
        if self.attempted is not None:
            data["attempted"] = self.attempted.value
        if self.concatenation:
            data["concatenation"] = list(self.concatenation)
        return data


@dataclass(frozen=True)
class ExtensionResult:
    """
    A verified extension of a perfect matching.

    ``partner`` is only set for the cut-2 case: the matching E \\ (m ∪ N),
    which completes the extension to the Hamiltonian cycle E \\ m.
    """

    extension: PerfectMatching
    trace: CaseTrace
    hamiltonian_cycle: Tuple[int, ...]
    partner: Optional[PerfectMatching] = None


@dataclass(frozen=True)
class ObstructionReport:
    """The 2-factors containing a candidate witness matching."""

    factor_lengths: Tuple[Tuple[int, ...], ...]
    hamiltonian: Optional[TwoFactor] = None

    @property
    def holds(self) -> bool:
        """True iff no 2-factor containing the matching is a Hamiltonian cycle."""
        return self.hamiltonian is None


# -- prisms -------------------------------------------------------------


def witness_prism(n: int) -> PerfectMatching:
    """
    Pairs of parallel edges u_{3k}u_{3k+1}, v_{3k}v_{3k+1} for
    k = 1..floor((n-1)/3), spokes everywhere else.
    """
    if n % 2 or n < 6:
        raise InvalidParameterError(
            f"Prism witness needs even n >= 6, got {n}",
            ErrorContext("witness_prism", PRISM, n),
        )
    prism = build_prism(n)
    paired: Set[int] = set()
    edges: List[int] = []
    for k in range(1, (n - 1) // 3 + 1):
        edges += [prism.outer_edge(3 * k), prism.inner_edge(3 * k)]
        paired.update({3 * k, 3 * k + 1})
    edges += [prism.spoke(i) for i in range(1, n + 1) if i not in paired]
    return as_perfect_matching(prism.graph, prism.graph.edge_set(edges))


def prism_spoke_run(prism: PrismGraph, m: PerfectMatching) -> int:
    """Length of the cyclic run of consecutive spokes in ``m`` through u1v1."""
    n = prism.n
    has = [prism.spoke(i) in m for i in range(1, n + 1)]
    if not has[0]:
        return 0
    if all(has):
        return n
    run = 1
    i = 1
    while has[i % n]:
        run += 1
        i += 1
    i = -1
    while has[i % n]:
        run += 1
        i -= 1
    return run


# -- odd crossed prisms -----------------------------------------------------


def witness_crossed_prism_odd(n: int) -> PerfectMatching:
    """All parallel edges u_{2i-1}u_{2i}, v_{2i-1}v_{2i} of every pole."""
    if n < 1 or n % 2 == 0:
        raise InvalidParameterError(
            f"Odd crossed prism witness needs odd n, got {n}",
            ErrorContext("witness_crossed_prism_odd", CROSSED_PRISM, n),
        )
    cp = build_crossed_prism(n)
    edges: List[int] = []
    for j in range(1, cp.poles + 1):
        edges += c4_pole(cp, j).parallel_pair
    return as_perfect_matching(cp.graph, cp.graph.edge_set(edges))


def obstruction_check(cp: CrossedPrismGraph, m: PerfectMatching) -> ObstructionReport:
    """
    Enumerate the 2-factors containing ``m`` and report whether any of them is
    a Hamiltonian cycle (which would refute ``m`` as a witness).
    """
    lengths: List[Tuple[int, ...]] = []
    hamiltonian: Optional[TwoFactor] = None
    for factor in two_factors_containing(cp.graph, m):
        lengths.append(tuple(factor.lengths))
        if hamiltonian is None and factor.is_hamiltonian:
            hamiltonian = factor
    report = ObstructionReport(tuple(sorted(set(lengths))), hamiltonian)
    if not report.holds:
        logger.info(f"{cp.name}: a Hamiltonian 2-factor contains the candidate witness")
    return report


# -- even crossed prisms ------------------------------------------------------


def _mates(cp: CrossedPrismGraph, m: PerfectMatching) -> Dict[int, int]:
    mate: Dict[int, int] = {}
    for e in m:
        edge = cp.graph.edges[e]
        mate[edge.u] = edge.v
        mate[edge.v] = edge.u
    return mate


def _all_cut_matching(cp: CrossedPrismGraph) -> EdgeSet:
    """The unique perfect matching made of every edge joining two poles."""
    internal = 0
    for j in range(1, cp.poles + 1):
        internal |= c4_pole(cp, j).internal(cp.graph.size).bits
    return cp.graph.full_edge_set() - EdgeSet(internal, cp.graph.size)


def _require_cut_size(
    cp: CrossedPrismGraph, m: PerfectMatching, size: int, operation: str
) -> Tuple[str, ...]:
    hit = cut_intersection(cp, m)
    if len(hit) != size:
        raise WrongCaseError(
            f"{operation} needs |m ∩ X| = {size}, got {len(hit)}",
            ErrorContext(operation, CROSSED_PRISM, cp.n, {"cut_edges": list(hit)}),
        )
    return hit


def _finish(
    cp: CrossedPrismGraph,
    m: PerfectMatching,
    candidate: EdgeSet,
    trace: CaseTrace,
    partner: Optional[PerfectMatching] = None,
) -> ExtensionResult:
    """Verify a structural candidate; fall back to exhaustive search if it fails."""
    g = cp.graph
    extension = PerfectMatching(candidate)
    if _covers_once(cp, candidate) and is_hamiltonian_union(g, m, extension):
        cycle = cycle_decomposition(g, m.edges | candidate)[0]
        return ExtensionResult(extension, trace, cycle.vertices, partner)

    logger.info(
        f"{cp.name}: {trace.subcase.value} construction failed verification; "
        f"falling back to exhaustive search"
    )
    found = find_extension(g, m)
    if found is None:
        raise RuntimeError(f"{cp.name}: no extension exists for {g.edge_names(m)}")
    fallback = CaseTrace(
        cut_size=trace.cut_size,
        subcase=Subcase.FALLBACK_SEARCH,
        cut_edges=trace.cut_edges,
        phi_right=trace.phi_right,
        phi_left=trace.phi_left,
        attempted=trace.subcase,
    )
    cycle = cycle_decomposition(g, m.edges | found.edges)[0]
    return ExtensionResult(found, fallback, cycle.vertices)


def _covers_once(cp: CrossedPrismGraph, es: EdgeSet) -> bool:
    seen = 0
    for e in es:
        edge = cp.graph.edges[e]
        bits = 1 << edge.u | 1 << edge.v
        if seen & bits:
            return False
        seen |= bits
    return seen == (1 << cp.graph.order) - 1


def pole_paths(cp: CrossedPrismGraph, m: PerfectMatching) -> List[Tuple[int, int, int]]:
    """
    P^(j) = E(T_j) \\ m for every pole, as an edge path (end, middle, end).

    Requires every pole to hold exactly one internal edge of ``m``.
    """
    paths = []
    for j in range(1, cp.poles + 1):
        ring = c4_pole(cp, j).internal_edges
        inside = [k for k, e in enumerate(ring) if e in m]
        if len(inside) != 1:
            raise WrongCaseError(
                f"T_{j} holds {len(inside)} internal matching edges; expected 1",
                ErrorContext("pole_paths", CROSSED_PRISM, cp.n, {"pole": j}),
            )
        k = inside[0]
        paths.append((ring[(k + 1) % 4], ring[(k + 2) % 4], ring[(k + 3) % 4]))
    return paths


def extend_cut2(cp: CrossedPrismGraph, m: PerfectMatching) -> ExtensionResult:
    """
    Extension for |m ∩ X| = 2: N takes both end edges of every path P^(j).

    N is internal to the poles, so the partner E \\ (m ∪ N) meets the cut in
    exactly the two cut edges that ``m`` avoids.
    """
    hit = _require_cut_size(cp, m, 2, "extend_cut2")
    g = cp.graph
    ends: List[int] = []
    for first, _, last in pole_paths(cp, m):
        ends += [first, last]
    n = g.edge_set(ends)
    partner = g.full_edge_set() - m.edges - n
    trace = CaseTrace(2, Subcase.CUT2_COMPLEMENTARY, cut_edges=hit)
    return _finish(cp, m, n, trace, PerfectMatching(partner))


def extend_cut4(cp: CrossedPrismGraph, m: PerfectMatching) -> ExtensionResult:
    """Extension of the all-cut matching: spokes of T_1, parallels everywhere else."""
    hit = _require_cut_size(cp, m, 4, "extend_cut4")
    if m.edges != _all_cut_matching(cp):
        raise WrongCaseError(
            "A matching containing the whole cut must be the all-cut matching",
            ErrorContext("extend_cut4", CROSSED_PRISM, cp.n),
        )
    edges = list(c4_pole(cp, 1).spoke_pair)
    for j in range(2, cp.poles + 1):
        edges += c4_pole(cp, j).parallel_pair
    trace = CaseTrace(4, Subcase.CUT4_EXPLICIT, cut_edges=hit)
    return _finish(cp, m, cp.graph.edge_set(edges), trace)


def rail_walk(cp: CrossedPrismGraph, m: PerfectMatching) -> EdgeSet:
    """
    Walk T_1..T_2n entering T_1 at u1 through a, carrying an upper/lower rail.

    In each pole the walk follows the matching edge at the entry vertex, one
    internal non-matching edge, the second matching edge, and leaves along the
    outgoing semiedge. Spoke-matched poles keep the rail and parallel-matched
    poles flip it, so a symmetric 2-chain keeps it and an asymmetric one flips
    it. Returns the non-matching edges used (internal steps and semiedges).
    """
    g = cp.graph
    mate = _mates(cp, m)
    upper = True
    edges: List[int] = []
    for j in range(1, cp.poles + 1):
        pole = c4_pole(cp, j)
        ul, ur, vr, vl = pole.vertices
        members = set(pole.vertices)
        x = ul if upper else vl
        x2 = mate[x]
        y = next(
            w for w in g.neighbors(x2) if w in members and w != x and w != x2
        )
        y2 = mate[y]
        edges.append(g.require_edge(x2, y))
        edges.append(pole.semiedges[1] if y2 == ur else pole.semiedges[3])
        upper = y2 == ur
    rail = "upper" if upper else "lower"
    logger.debug(f"{cp.name}: rail walk ends on the {rail} rail")
    return g.edge_set(edges)


def _trace_strand(cp: CrossedPrismGraph, union: EdgeSet, start: int) -> List[int]:
    """Follow a strand of ``union`` from a left vertex of a side's first pole."""
    g = cp.graph
    cut = cp.cut_set()
    path = [start]
    prev = -1
    x = start
    while True:
        step = [
            e for e in g.incident(x) if e in union and e not in cut and e != prev
        ]
        if not step:
            return path
        prev = step[0]
        x = g.edges[prev].other(x)
        path.append(x)


def assemble_all_cut_cycle(
    cp: CrossedPrismGraph, m: PerfectMatching
) -> Tuple[List[int], Tuple[str, ...]]:
    """
    Stitch the strands of m ∪ M* through the principal cut.

    Each chain side of m ∪ M* is two disjoint paths between the outer poles of
    that side. Starting at u1 the strands are visited as R1, then a cut edge,
    L1, a cut edge, R2, and so on. Returns the vertex sequence followed and
    the concatenation labels; the sequence covers every vertex only when the
    stitched strands close into one cycle.
    """
    g = cp.graph
    union = m.edges | _all_cut_matching(cp)
    cut_names = {e: name for name, e in cp.cut.as_dict().items()}
    first_right = c4_pole(cp, 1)
    first_left = c4_pole(cp, cp.n + 1)
    starts = {
        ChainSide.RIGHT: (first_right.vertices[0], first_right.vertices[3]),
        ChainSide.LEFT: (first_left.vertices[0], first_left.vertices[3]),
    }
    strands: Dict[int, Tuple[ChainSide, List[int]]] = {}
    for side, pair in starts.items():
        for s in pair:
            strands[s] = (side, _trace_strand(cp, union, s))

    order: List[int] = []
    labels: List[str] = []
    used = {ChainSide.RIGHT: 0, ChainSide.LEFT: 0}
    x = first_right.vertices[0]
    while x in strands and len(labels) < 8:
        side, path = strands.pop(x)
        used[side] += 1
        labels.append(f"{'R' if side is ChainSide.RIGHT else 'L'}{used[side]}")
        order += path
        end = path[-1]
        closing = next(e for e in g.incident(end) if e in union and e in cut_names)
        labels.append(cut_names[closing])
        x = g.edges[closing].other(end)
    return order, tuple(labels)


def extend_cut0(cp: CrossedPrismGraph, m: PerfectMatching) -> ExtensionResult:
    """
    Extension when every pole is matched internally.

    Both sides with an even number of asymmetric 2-chains: rail walk closed by
    a and d. Exactly one odd side: the all-cut matching, with the strands of
    both sides stitched through the cut. Anything that fails verification is
    replaced by exhaustive search.
    """
    _require_cut_size(cp, m, 0, "extend_cut0")
    phi_r = phi_product(cp, m, ChainSide.RIGHT)
    phi_l = phi_product(cp, m, ChainSide.LEFT)
    logger.debug(f"{cp.name}: phi_right={phi_r} phi_left={phi_l}")

    if phi_r == 1 and phi_l == 1:
        trace = CaseTrace(0, Subcase.CUT0_BOTH_EVEN, phi_right=phi_r, phi_left=phi_l)
        return _finish(cp, m, rail_walk(cp, m), trace)

    _, labels = assemble_all_cut_cycle(cp, m)
    trace = CaseTrace(
        0,
        Subcase.CUT0_ONE_ODD,
        phi_right=phi_r,
        phi_left=phi_l,
        concatenation=labels,
    )
    return _finish(cp, m, _all_cut_matching(cp), trace)


def extend_crossed_prism(cp: CrossedPrismGraph, m: PerfectMatching) -> ExtensionResult:
    """Dispatch on |m ∩ X| for even n; the result is always verified."""
    if cp.n % 2:
        raise TheoremScopeError(
            f"The case construction covers even n only (got n={cp.n}); "
            f"see witness_crossed_prism_odd and find_extension for odd n",
            ErrorContext("extend_crossed_prism", CROSSED_PRISM, cp.n),
        )
    as_perfect_matching(cp.graph, m.edges)
    size = len(cut_intersection(cp, m))
    if size == 2:
        result = extend_cut2(cp, m)
    elif size == 4:
        result = extend_cut4(cp, m)
    else:
        result = extend_cut0(cp, m)
    logger.debug(f"{cp.name}: extension via {result.trace.subcase.value}")
    return result
