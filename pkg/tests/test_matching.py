"""
Test Matching Engine
Tests for perfect matching enumeration, the PMH oracle, extension search and
the 3-edge-colouring checks.
"""

import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from pmhprism.errors import (
    NoMatchingPossibleError,
    ResourceCapExceeded,
    UnsupportedDegreeError,
)
from pmhprism.families import build_crossed_prism, build_fixture, build_prism
from pmhprism.graph import (
    EdgeClass,
    EdgeSet,
    Graph,
    PerfectMatching,
    VertexLabel,
    VertexRole,
    is_hamiltonian_union,
    validate_perfect_matching,
)
from pmhprism.matching import (
    check_pmh,
    count_by_cut,
    count_perfect_matchings,
    enumerate_perfect_matchings,
    extends_to_3ec,
    extends_to_3ec_by_colouring,
    find_extension,
    proposition_e2f_check,
    two_factors_containing,
)
from pmhprism.performance import ResourceBudget


def triangle() -> Graph:
    labels = [VertexLabel(VertexRole.GENERIC, i) for i in (1, 2, 3)]
    return Graph(labels, [(0, 1, EdgeClass.GENERIC), (1, 2, EdgeClass.GENERIC), (0, 2, EdgeClass.GENERIC)])


class TestEnumeration(unittest.TestCase):
    """Test enumerate_perfect_matchings."""

    def test_known_counts(self):
        cases = [
            (build_prism(4).graph, 9),
            (build_crossed_prism(1).graph, 9),
            (build_crossed_prism(2).graph, 33),
            (build_crossed_prism(3).graph, 129),
            (build_fixture("petersen"), 6),
            (build_fixture("k4"), 3),
            (build_fixture("k33"), 6),
            (build_fixture("c4"), 2),
        ]
        for g, expected in cases:
            with self.subTest(graph=g.name):
                self.assertEqual(count_perfect_matchings(g), expected)

    def test_prism_counts_follow_lucas_numbers(self):
        lucas = {3: 4, 4: 7, 5: 11, 6: 18, 7: 29, 8: 47}
        for n, value in lucas.items():
            with self.subTest(n=n):
                extra = 2 if n % 2 == 0 else 0
                self.assertEqual(count_perfect_matchings(build_prism(n).graph), value + extra)

    def test_matches_bitmask_oracle(self):
        g = build_prism(4).graph
        brute = {
            bits
            for bits in range(1 << g.size)
            if bin(bits).count("1") == g.order // 2
            and validate_perfect_matching(g, EdgeSet(bits, g.size))
        }
        found = {m.edges.bits for m in enumerate_perfect_matchings(g)}
        self.assertEqual(found, brute)

    def test_order_is_deterministic_and_unique(self):
        g = build_crossed_prism(2).graph
        first = [m.edges for m in enumerate_perfect_matchings(g)]
        second = [m.edges for m in enumerate_perfect_matchings(g)]
        self.assertEqual(first, second)
        self.assertEqual(len(set(first)), len(first))

    def test_every_matching_is_valid(self):
        g = build_crossed_prism(2).graph
        for m in enumerate_perfect_matchings(g):
            self.assertTrue(validate_perfect_matching(g, m.edges))

    def test_odd_order(self):
        with self.assertRaises(NoMatchingPossibleError):
            list(enumerate_perfect_matchings(triangle()))

    def test_matching_cap(self):
        budget = ResourceBudget(matching_cap=5)
        with self.assertRaises(ResourceCapExceeded):
            count_perfect_matchings(build_crossed_prism(2).graph, budget)

    def test_counts_by_cut_size(self):
        for n in (1, 2, 3):
            with self.subTest(n=n):
                cp = build_crossed_prism(n)
                self.assertEqual(count_by_cut(cp), {0: 4**n, 2: 4**n, 4: 1})


class TestExtensionSearch(unittest.TestCase):
    """Test find_extension."""

    def test_cube_matchings_all_extend(self):
        g = build_prism(4).graph
        for m in enumerate_perfect_matchings(g):
            n = find_extension(g, m)
            self.assertIsNotNone(n)
            self.assertTrue(is_hamiltonian_union(g, m, n))

    def test_spokes_of_odd_prism_do_not_extend(self):
        prism = build_prism(5)
        self.assertIsNone(find_extension(prism.graph, PerfectMatching(prism.spokes())))

    def test_crossed_prism_matchings_all_extend(self):
        for n in (1, 2):
            g = build_crossed_prism(n).graph
            for m in enumerate_perfect_matchings(g):
                with self.subTest(n=n, m=g.edge_names(m)):
                    ext = find_extension(g, m)
                    self.assertIsNotNone(ext)
                    self.assertTrue(ext.edges.isdisjoint(m.edges))

    def test_random_spot_checks(self):
        rng = random.Random(7)
        for g in (build_crossed_prism(3).graph, build_prism(4).graph):
            matchings = list(enumerate_perfect_matchings(g))
            for m in rng.sample(matchings, min(10, len(matchings))):
                with self.subTest(graph=g.name):
                    self.assertTrue(is_hamiltonian_union(g, m, find_extension(g, m)))


class TestPmhOracle(unittest.TestCase):
    """Test check_pmh against the known verdicts."""

    def test_prism_verdicts(self):
        for n in range(3, 13):
            with self.subTest(n=n):
                verdict = check_pmh(build_prism(n).graph)
                self.assertEqual(verdict.is_pmh, n == 4)
                self.assertEqual(verdict.witness is None, n == 4)

    def test_witness_is_inextensible(self):
        g = build_prism(7).graph
        verdict = check_pmh(g)
        self.assertFalse(verdict.is_pmh)
        self.assertIsNone(find_extension(g, verdict.witness))
        self.assertGreaterEqual(verdict.matchings_examined, 1)

    def test_crossed_prisms_are_pmh(self):
        for n in (1, 2, 3):
            with self.subTest(n=n):
                cp = build_crossed_prism(n)
                verdict = check_pmh(cp.graph)
                self.assertTrue(verdict.is_pmh)
                self.assertEqual(verdict.matchings_examined, 2 ** (2 * n + 1) + 1)

    def test_fixtures(self):
        self.assertTrue(check_pmh(build_fixture("k4")).is_pmh)
        self.assertTrue(check_pmh(build_fixture("k33")).is_pmh)
        self.assertFalse(check_pmh(build_fixture("petersen")).is_pmh)

    def test_needs_cubic_graph(self):
        with self.assertRaises(UnsupportedDegreeError):
            check_pmh(build_fixture("c4"))

    def test_workers_do_not_change_the_verdict(self):
        for g in (build_prism(6).graph, build_crossed_prism(2).graph):
            with self.subTest(graph=g.name):
                serial = check_pmh(g, jobs=1)
                parallel = check_pmh(g, jobs=2)
                self.assertEqual(serial, parallel)


class TestThreeEdgeColouring(unittest.TestCase):
    """Test extends_to_3ec and the even-2-factor comparison."""

    def test_prism_spokes(self):
        even, odd = build_prism(4), build_prism(5)
        self.assertTrue(extends_to_3ec(even.graph, PerfectMatching(even.spokes())))
        self.assertFalse(extends_to_3ec(odd.graph, PerfectMatching(odd.spokes())))

    def test_petersen_never_extends(self):
        g = build_fixture("petersen")
        for m in enumerate_perfect_matchings(g):
            self.assertFalse(extends_to_3ec(g, m))

    def test_colouring_search_agrees_with_parity(self):
        graphs = [build_fixture("k4"), build_fixture("k33"), build_fixture("petersen")]
        graphs += [build_prism(n).graph for n in (3, 5, 6)]
        graphs += [build_crossed_prism(2).graph]
        for g in graphs:
            for m in enumerate_perfect_matchings(g):
                with self.subTest(graph=g.name):
                    extends_to_3ec(g, m, cross_check=True)

    def test_proposition_corpus(self):
        expected = {
            "k4": (True, True),
            "k33": (True, True),
            "petersen": (False, False),
        }
        for name, pair in expected.items():
            with self.subTest(graph=name):
                verdict = proposition_e2f_check(build_fixture(name))
                self.assertEqual((verdict.every_pm_extends, verdict.all_two_factors_even), pair)
                self.assertTrue(verdict.consistent)
        for n in (3, 5, 7, 9):
            verdict = proposition_e2f_check(build_prism(n).graph)
            self.assertEqual((verdict.every_pm_extends, verdict.all_two_factors_even), (False, False))
        for n in (4, 6, 8, 10):
            verdict = proposition_e2f_check(build_prism(n).graph)
            self.assertEqual((verdict.every_pm_extends, verdict.all_two_factors_even), (True, True))
        for n in (1, 2, 3):
            verdict = proposition_e2f_check(build_crossed_prism(n).graph)
            self.assertEqual((verdict.every_pm_extends, verdict.all_two_factors_even), (True, True))

    def test_proposition_counts(self):
        verdict = proposition_e2f_check(build_fixture("petersen"))
        self.assertEqual(verdict.matchings_examined, 6)
        self.assertFalse(verdict.vacuous)

    def test_proposition_needs_cubic_graph(self):
        with self.assertRaises(UnsupportedDegreeError):
            proposition_e2f_check(build_fixture("c4"))

    def test_colouring_needs_cubic_graph(self):
        c4 = build_fixture("c4")
        with self.assertRaises(UnsupportedDegreeError):
            extends_to_3ec_by_colouring(c4, next(enumerate_perfect_matchings(c4)))


class TestTwoFactorsContaining(unittest.TestCase):
    """Test two_factors_containing."""

    def test_cube_spokes(self):
        prism = build_prism(4)
        m = PerfectMatching(prism.spokes())
        factors = list(two_factors_containing(prism.graph, m))
        self.assertEqual(len(factors), 4)
        for factor in factors:
            self.assertTrue(m.edges.issubset(factor.edges))
        self.assertEqual(sum(f.is_hamiltonian for f in factors), 2)

    def test_odd_complement_has_none(self):
        prism = build_prism(5)
        self.assertEqual(list(two_factors_containing(prism.graph, PerfectMatching(prism.spokes()))), [])


class TestMatchingProperties(unittest.TestCase):
    """Property tests for the extension search."""

    @settings(max_examples=40, deadline=None)
    @given(n=st.sampled_from([1, 2, 3]), data=st.data())
    def test_extensions_are_hamiltonian(self, n, data):
        g = build_crossed_prism(n).graph
        m = data.draw(st.sampled_from(list(enumerate_perfect_matchings(g))))
        ext = find_extension(g, m)
        self.assertIsNotNone(ext)
        self.assertTrue(is_hamiltonian_union(g, m, ext))

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(3, 10), data=st.data())
    def test_extension_exists_iff_a_factor_is_hamiltonian(self, n, data):
        g = build_prism(n).graph
        m = data.draw(st.sampled_from(list(enumerate_perfect_matchings(g))))
        hamiltonian = any(f.is_hamiltonian for f in two_factors_containing(g, m))
        self.assertEqual(find_extension(g, m) is not None, hamiltonian)


if __name__ == "__main__":
    unittest.main()
