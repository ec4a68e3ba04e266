"""
Test Graph Core
Tests for edge sets, perfect matching validation, 2-factors and cycle tracing.
"""

import unittest

import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st

from pmhprism.errors import (
    MalformedFactorError,
    MalformedInputError,
    UnsupportedDegreeError,
)
from pmhprism.families import build_crossed_prism, build_fixture, build_prism, c4_pole
from pmhprism.graph import (
    EdgeClass,
    EdgeSet,
    Graph,
    PerfectMatching,
    VertexLabel,
    VertexRole,
    complement_two_factor,
    cycle_decomposition,
    is_hamiltonian_union,
    validate_perfect_matching,
)
from pmhprism.matching import enumerate_perfect_matchings


def names_to_set(g: Graph, names):
    index = {g.edge_name(e): e for e in range(g.size)}
    return g.edge_set(index[name] for name in names)


class TestEdgeSet(unittest.TestCase):
    """Test bitset edge sets."""

    def test_iteration_is_ascending(self):
        es = EdgeSet.from_indices([5, 1, 3], 8)
        self.assertEqual(list(es), [1, 3, 5])
        self.assertEqual(len(es), 3)

    def test_algebra(self):
        a = EdgeSet.from_indices([0, 1, 2], 6)
        b = EdgeSet.from_indices([2, 3], 6)
        self.assertEqual((a | b).indices(), (0, 1, 2, 3))
        self.assertEqual((a & b).indices(), (2,))
        self.assertEqual((a - b).indices(), (0, 1))
        self.assertFalse(a.isdisjoint(b))
        self.assertTrue(EdgeSet.from_indices([2], 6).issubset(a))

    def test_equality_is_canonical(self):
        self.assertEqual(EdgeSet.from_indices([1, 2], 4), EdgeSet.from_indices([2, 1], 4))
        self.assertNotEqual(EdgeSet.from_indices([1], 4), EdgeSet.from_indices([1], 5))

    def test_out_of_range_index(self):
        with self.assertRaises(MalformedInputError):
            EdgeSet.from_indices([12], 12)

    def test_mixed_widths_rejected(self):
        with self.assertRaises(MalformedInputError):
            EdgeSet.from_indices([0], 3) | EdgeSet.from_indices([0], 4)


class TestGraphConstruction(unittest.TestCase):
    """Test graph invariants enforced at construction."""

    def labels(self, k):
        return [VertexLabel(VertexRole.GENERIC, i + 1) for i in range(k)]

    def test_loop_rejected(self):
        with self.assertRaises(MalformedInputError):
            Graph(self.labels(2), [(0, 0, EdgeClass.GENERIC)])

    def test_parallel_edge_rejected(self):
        with self.assertRaises(MalformedInputError):
            Graph(self.labels(2), [(0, 1, EdgeClass.GENERIC), (1, 0, EdgeClass.GENERIC)])

    def test_disconnected_rejected(self):
        edges = [(0, 1, EdgeClass.GENERIC), (2, 3, EdgeClass.GENERIC)]
        with self.assertRaises(MalformedInputError):
            Graph(self.labels(4), edges)

    def test_connected_families(self):
        for g in (build_prism(5).graph, build_fixture("k33"), build_fixture("c4")):
            with self.subTest(graph=g.name):
                self.assertTrue(g.is_connected())

    def test_forest_has_no_girth(self):
        path = Graph(self.labels(3), [(0, 1, EdgeClass.GENERIC), (1, 2, EdgeClass.GENERIC)])
        self.assertIsNone(path.girth())

    def test_label_lookup(self):
        p4 = build_prism(4)
        g = p4.graph
        self.assertEqual(g.vertex(VertexLabel.parse("v3")), p4.v(3))
        self.assertEqual(g.label_of(p4.u(2)), "u2")
        with self.assertRaises(MalformedInputError):
            g.vertex(VertexLabel.parse("u9"))
        with self.assertRaises(MalformedInputError):
            VertexLabel.parse("w1")

    def test_girth(self):
        self.assertEqual(build_prism(3).graph.girth(), 3)
        self.assertEqual(build_prism(4).graph.girth(), 4)
        self.assertEqual(build_fixture("petersen").girth(), 5)

    def test_networkx_round_trip(self):
        petersen = Graph.from_networkx(nx.petersen_graph(), name="petersen")
        self.assertEqual((petersen.order, petersen.size), (10, 15))
        self.assertTrue(petersen.is_cubic())
        exported = petersen.to_networkx()
        self.assertTrue(nx.is_connected(exported))
        self.assertEqual(exported.number_of_edges(), 15)


class TestPerfectMatchingValidation(unittest.TestCase):
    """Test validate_perfect_matching."""

    def setUp(self):
        self.p4 = build_prism(4)
        self.g = self.p4.graph

    def test_spokes_are_a_perfect_matching(self):
        self.assertTrue(validate_perfect_matching(self.g, self.p4.spokes()))

    def test_partial_cover_is_not(self):
        m = names_to_set(self.g, ["u1-u2", "u3-u4", "v1-v2"])
        self.assertFalse(validate_perfect_matching(self.g, m))

    def test_foreign_edge_set_rejected(self):
        with self.assertRaises(MalformedInputError):
            validate_perfect_matching(self.g, EdgeSet.from_indices([0], 30))

    def test_matching_size_is_half_the_order(self):
        for m in enumerate_perfect_matchings(self.g):
            self.assertEqual(len(m), self.g.order // 2)


class TestTwoFactors(unittest.TestCase):
    """Test complements and cycle decomposition."""

    def test_prism_spoke_complements(self):
        for n, expected in [(4, [4, 4]), (5, [5, 5])]:
            with self.subTest(n=n):
                prism = build_prism(n)
                factor = complement_two_factor(prism.graph, PerfectMatching(prism.spokes()))
                self.assertEqual(factor.lengths, expected)
                self.assertEqual(factor.has_odd_cycle, n % 2 == 1)

    def test_rim_cycles(self):
        prism = build_prism(6)
        rims = prism.graph.full_edge_set() - prism.spokes()
        self.assertEqual([c.length for c in cycle_decomposition(prism.graph, rims)], [6, 6])

    def test_parallels_and_spokes_of_crossed_prism_are_four_cycles(self):
        cp = build_crossed_prism(2)
        edges = []
        for j in range(1, 5):
            pole = c4_pole(cp, j)
            edges += pole.parallel_pair + pole.spoke_pair
        cycles = cycle_decomposition(cp.graph, cp.graph.edge_set(edges))
        self.assertEqual([c.length for c in cycles], [4, 4, 4, 4])

    def test_canonical_cycle_order(self):
        prism = build_prism(4)
        rims = prism.graph.full_edge_set() - prism.spokes()
        outer, inner = cycle_decomposition(prism.graph, rims)
        self.assertEqual(outer.vertices, (0, 1, 2, 3))
        self.assertEqual(inner.vertices[0], 4)

    def test_not_two_regular(self):
        prism = build_prism(4)
        with self.assertRaises(MalformedFactorError):
            cycle_decomposition(prism.graph, prism.spokes())

    def test_complement_needs_cubic_graph(self):
        c4 = build_fixture("c4")
        m = next(enumerate_perfect_matchings(c4))
        with self.assertRaises(UnsupportedDegreeError):
            complement_two_factor(c4, m)


class TestHamiltonianUnion(unittest.TestCase):
    """Test is_hamiltonian_union."""

    def setUp(self):
        self.p4 = build_prism(4)
        self.g = self.p4.graph
        self.spokes = PerfectMatching(self.p4.spokes())

    def test_same_matching_twice(self):
        self.assertFalse(is_hamiltonian_union(self.g, self.spokes, self.spokes))

    def test_spokes_with_outer_pairs_close_squares(self):
        pairs = names_to_set(self.g, ["u1-u2", "u3-u4", "v1-v2", "v3-v4"])
        self.assertFalse(is_hamiltonian_union(self.g, self.spokes, PerfectMatching(pairs)))

    def test_spokes_with_shifted_pairs(self):
        pairs = names_to_set(self.g, ["u2-u3", "u1-u4", "v1-v2", "v3-v4"])
        n = PerfectMatching(pairs)
        self.assertTrue(is_hamiltonian_union(self.g, self.spokes, n))
        self.assertTrue(is_hamiltonian_union(self.g, n, self.spokes))

    def test_rejects_non_matchings(self):
        bad = PerfectMatching(names_to_set(self.g, ["u1-u2"]))
        with self.assertRaises(MalformedInputError):
            is_hamiltonian_union(self.g, self.spokes, bad)


class TestTwoFactorProperties(unittest.TestCase):
    """Property tests over prism and crossed prism matchings."""

    @settings(max_examples=40, deadline=None)
    @given(family=st.sampled_from(["prism", "crossed-prism"]), n=st.integers(1, 8), data=st.data())
    def test_complement_lengths(self, family, n, data):
        g = build_prism(n + 2).graph if family == "prism" else build_crossed_prism(min(n, 3)).graph
        matchings = list(enumerate_perfect_matchings(g))
        m = data.draw(st.sampled_from(matchings))
        factor = complement_two_factor(g, m)
        self.assertEqual(sum(factor.lengths), g.order)
        self.assertTrue(all(length >= max(3, g.girth()) for length in factor.lengths))

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(3, 9), data=st.data())
    def test_union_symmetry(self, n, data):
        g = build_prism(n).graph
        matchings = list(enumerate_perfect_matchings(g))
        m1 = data.draw(st.sampled_from(matchings))
        m2 = data.draw(st.sampled_from(matchings))
        self.assertEqual(is_hamiltonian_union(g, m1, m2), is_hamiltonian_union(g, m2, m1))


if __name__ == "__main__":
    unittest.main()
