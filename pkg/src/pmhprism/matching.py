"""
Matching Engine
Exhaustive perfect matching enumeration and the brute-force decision
procedures (PMH, 3-edge-colouring extendability) every construction is
checked against.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from pmhprism.errors import (
    ErrorContext,
    NoMatchingPossibleError,
    UnsupportedDegreeError,
)
from pmhprism.families import CrossedPrismGraph, cut_intersection
from pmhprism.graph import (
    EdgeSet,
    Graph,
    PerfectMatching,
    TwoFactor,
    complement_two_factor,
    cycle_decomposition,
    cycle_edges,
    is_hamiltonian_union,
)
from pmhprism.performance import ResourceBudget

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PmhVerdict:
    """Outcome of an exhaustive PMH check; ``witness`` is set iff not PMH."""

    is_pmh: bool
    witness: Optional[PerfectMatching]
    matchings_examined: int


@dataclass(frozen=True)
class E2fVerdict:
    """Both sides of the even-2-factor equivalence, computed independently."""

    every_pm_extends: bool
    all_two_factors_even: bool
    matchings_examined: int = 0
    vacuous: bool = False

    @property
    def consistent(self) -> bool:
        return self.every_pm_extends == self.all_two_factors_even


def _require_cubic(g: Graph, operation: str) -> None:
    if not g.is_cubic():
        raise UnsupportedDegreeError(
            f"{g.name or 'graph'} is not cubic", ErrorContext(operation)
        )


def enumerate_perfect_matchings(
    g: Graph,
    budget: Optional[ResourceBudget] = None,
    first_edge: Optional[int] = None,
) -> Iterator[PerfectMatching]:
    """
    Yield every perfect matching of ``g`` exactly once.

    Branches on the lowest-index uncovered vertex, trying its incident edges in
    edge-index order. ``first_edge`` pins the first branching decision (the
    edge chosen at vertex 0), which is how the stream is split across workers.
    """
    if g.order % 2:
        raise NoMatchingPossibleError(
            f"{g.name or 'graph'} has odd order {g.order}",
            ErrorContext("enumerate_perfect_matchings"),
        )
    if g.order == 0:
        yield PerfectMatching(EdgeSet.empty(g.size))
        return

    full = (1 << g.order) - 1
    edges = g.edges
    chosen: List[int] = []

    def extend(covered: int) -> Iterator[PerfectMatching]:
        if covered == full:
            if budget is not None:
                budget.tick()
            yield PerfectMatching(g.edge_set(chosen))
            return
        free = ~covered & full
        x = (free & -free).bit_length() - 1
        for e in g.incident(x):
            if x == 0 and first_edge is not None and e != first_edge:
                continue
            y = edges[e].other(x)
            if covered >> y & 1:
                continue
            chosen.append(e)
            yield from extend(covered | 1 << x | 1 << y)
            chosen.pop()

    yield from extend(0)


def count_perfect_matchings(g: Graph, budget: Optional[ResourceBudget] = None) -> int:
    return sum(1 for _ in enumerate_perfect_matchings(g, budget))


def _alternating_halves(
    g: Graph, factor: TwoFactor
) -> Optional[List[Tuple[EdgeSet, EdgeSet]]]:
    """The two alternating halves of every cycle, or None if a cycle is odd."""
    if factor.has_odd_cycle:
        return None
    halves = []
    for cycle in factor.cycles:
        seq = cycle_edges(g, cycle)
        halves.append((g.edge_set(seq[0::2]), g.edge_set(seq[1::2])))
    return halves


class _RollbackDSU:
    """Union-find with undo, tracking component sizes."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.history: List[Tuple[int, int]] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> Tuple[bool, int]:
        """Merge; returns (merged, size of the resulting component)."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False, self.size[rx]
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.history.append((rx, ry))
        return True, self.size[rx]

    def rollback(self, mark: int) -> None:
        while len(self.history) > mark:
            rx, ry = self.history.pop()
            self.parent[ry] = ry
            self.size[rx] -= self.size[ry]


def find_extension(g: Graph, m: PerfectMatching) -> Optional[PerfectMatching]:
    """
    Some perfect matching N disjoint from ``m`` with m ∪ N Hamiltonian, or None.

    N lives inside the complement 2-factor and alternates along each of its
    cycles, so the search is one binary phase choice per complement cycle.
    Choices that close a cycle shorter than |V| are pruned.
    """
    factor = complement_two_factor(g, m)
    halves = _alternating_halves(g, factor)
    if halves is None:
        return None

    dsu = _RollbackDSU(g.order)
    for e in m:
        dsu.union(g.edges[e].u, g.edges[e].v)

    picked: List[EdgeSet] = []

    def add(es: EdgeSet) -> bool:
        for e in es:
            merged, size = dsu.union(g.edges[e].u, g.edges[e].v)
            if not merged and size < g.order:
                return False
        return True

    def search(k: int) -> bool:
        if k == len(halves):
            return True
        for half in halves[k]:
            mark = len(dsu.history)
            if add(half):
                picked.append(half)
                if search(k + 1):
                    return True
                picked.pop()
            dsu.rollback(mark)
        return False

    if not search(0):
        return None
    bits = 0
    for half in picked:
        bits |= half.bits
    n = PerfectMatching(EdgeSet(bits, g.size))
    if not is_hamiltonian_union(g, m, n):
        raise RuntimeError("Extension search produced a non-Hamiltonian union")
    return n


def _check_branch(
    g: Graph,
    first_edge: Optional[int],
    timeout_s: Optional[float],
    matching_cap: Optional[int],
) -> Tuple[Optional[PerfectMatching], int]:
    """First non-extendable matching of one branch, and the count examined."""
    budget = ResourceBudget(timeout_s, matching_cap, operation="check_pmh")
    examined = 0
    for m in enumerate_perfect_matchings(g, budget, first_edge=first_edge):
        examined += 1
        if find_extension(g, m) is None:
            return m, examined
    return None, examined


def check_pmh(
    g: Graph,
    budget: Optional[ResourceBudget] = None,
    jobs: int = 1,
) -> PmhVerdict:
    """
    Exhaustive PMH decision.

    The witness is the first non-extendable matching in enumeration order and
    ``matchings_examined`` counts matchings up to it, so the verdict does not
    depend on ``jobs``.
    """
    _require_cubic(g, "check_pmh")
    if jobs <= 1 or g.order == 0:
        examined = 0
        for m in enumerate_perfect_matchings(g, budget):
            examined += 1
            if find_extension(g, m) is None:
                logger.debug(f"{g.name}: matching #{examined} has no extension")
                return PmhVerdict(False, m, examined)
        return PmhVerdict(True, None, examined)

    timeout_s = budget.timeout_s if budget is not None else None
    cap = budget.matching_cap if budget is not None else None
    branches = list(g.incident(0))
    logger.debug(f"{g.name}: checking {len(branches)} branches on {jobs} workers")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_check_branch, g, e, timeout_s, cap) for e in branches
        ]
        results = [f.result() for f in futures]

    examined = 0
    for witness, count in results:
        examined += count
        if witness is not None:
            return PmhVerdict(False, witness, examined)
    return PmhVerdict(True, None, examined)


def extends_to_3ec_by_colouring(g: Graph, m: PerfectMatching) -> bool:
    """
    Direct search for a proper 3-edge-colouring with ``m`` as colour class 0.

    Colours 1 and 2 are assigned to the remaining edges; each guess is
    propagated through vertices until it is forced everywhere it reaches.
    """
    _require_cubic(g, "extends_to_3ec")
    colour: Dict[int, int] = {e: 0 for e in m}
    free = [e.index for e in g.edges if e.index not in colour]

    def propagate(start: int, c: int, assigned: List[int]) -> bool:
        stack = [(start, c)]
        while stack:
            e, c = stack.pop()
            if e in colour:
                if colour[e] != c:
                    return False
                continue
            colour[e] = c
            assigned.append(e)
            for x in g.edges[e].endpoints:
                for f in g.incident(x):
                    if f == e:
                        continue
                    if colour.get(f) == c:
                        return False
                    if f not in colour and f not in m:
                        stack.append((f, 3 - c))
        return True

    def search(k: int) -> bool:
        while k < len(free) and free[k] in colour:
            k += 1
        if k == len(free):
            return True
        for c in (1, 2):
            assigned: List[int] = []
            if propagate(free[k], c, assigned) and search(k + 1):
                return True
            for e in assigned:
                del colour[e]
        return False

    return search(0)


def extends_to_3ec(g: Graph, m: PerfectMatching, cross_check: bool = True) -> bool:
    """True iff the complement 2-factor of ``m`` has only even cycles."""
    result = not complement_two_factor(g, m).has_odd_cycle
    if cross_check and extends_to_3ec_by_colouring(g, m) != result:
        raise RuntimeError(
            f"3-edge-colouring search disagrees with cycle parity on {g.name}"
        )
    return result


def proposition_e2f_check(
    g: Graph, budget: Optional[ResourceBudget] = None
) -> E2fVerdict:
    """
    Compare "every perfect matching extends to a 3-edge-colouring" with
    "every 2-factor has only even cycles" over all perfect matchings.
    """
    _require_cubic(g, "proposition_e2f_check")
    every_extends = True
    all_even = True
    examined = 0
    try:
        for m in enumerate_perfect_matchings(g, budget):
            examined += 1
            every_extends &= extends_to_3ec_by_colouring(g, m)
            all_even &= not complement_two_factor(g, m).has_odd_cycle
    except NoMatchingPossibleError:
        return E2fVerdict(True, True, 0, vacuous=True)
    verdict = E2fVerdict(every_extends, all_even, examined, vacuous=examined == 0)
    if not verdict.consistent:
        logger.error(f"{g.name}: E2F sides disagree ({verdict})")
    return verdict


def two_factors_containing(g: Graph, m: PerfectMatching) -> Iterator[TwoFactor]:
    """Every 2-factor of cubic ``g`` that contains the perfect matching ``m``."""
    halves = _alternating_halves(g, complement_two_factor(g, m))
    if halves is None:
        return
    for choice in product((0, 1), repeat=len(halves)):
        bits = m.edges.bits
        for pair, k in zip(halves, choice):
            bits |= pair[k].bits
        f = EdgeSet(bits, g.size)
        yield TwoFactor(f, cycle_decomposition(g, f))


def count_by_cut(
    cp: CrossedPrismGraph, budget: Optional[ResourceBudget] = None
) -> Dict[int, int]:
    """Perfect matchings of CP_n grouped by |m ∩ X|."""
    counts = {0: 0, 2: 0, 4: 0}
    for m in enumerate_perfect_matchings(cp.graph, budget):
        size = len(cut_intersection(cp, m))
        counts[size] = counts.get(size, 0) + 1
    return counts
