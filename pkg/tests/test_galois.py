"""
SIL — Galois Type Tests
"""

import sys
import os
import itertools
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from sil.catalog import graph_from_edges, make_class, parse_class_spec
from sil.galois import (
    BaseMismatchError,
    PointedExtension,
    check_tameness,
    count_types,
    find_order_property,
    gtp_equal,
    is_order_witness,
    realizations,
    tameness_sweep,
)
from sil.diagrams import SearchBudget
from sil.reporting import Verdict
from sil.structures import FinStructure, Vocabulary

GRAPH = make_class("graph")
FINSET = make_class("finset")
KLOCAL = parse_class_spec("klocal_graph:2")

VERTEX = graph_from_edges(1, [])
EDGE = graph_from_edges(2, [(0, 1)])
NON_EDGE = graph_from_edges(2, [])
CHERRY = graph_from_edges(3, [(0, 1), (0, 2)])


def points(n: int) -> FinStructure:
    return FinStructure(Vocabulary(), range(n))


# ---------------------------------------------------------------------------
# Type equality
# ---------------------------------------------------------------------------

class TestTypeEquality(unittest.TestCase):

    def test_neighbour_types(self):
        adjacent = PointedExtension(VERTEX, EDGE, (1,))
        also_adjacent = PointedExtension(VERTEX, CHERRY, (2,))
        apart = PointedExtension(VERTEX, NON_EDGE, (1,))
        for method in ("certificate", "search"):
            self.assertEqual(gtp_equal(adjacent, also_adjacent, GRAPH, method=method), Verdict.HOLDS, method)
            self.assertEqual(gtp_equal(adjacent, apart, GRAPH, method=method), Verdict.FAILS, method)

    def test_same_pointed_extension(self):
        p = PointedExtension(VERTEX, EDGE, (1,))
        self.assertEqual(gtp_equal(p, p, GRAPH), Verdict.HOLDS)

    def test_lengths_differ(self):
        p = PointedExtension(VERTEX, EDGE, (1,))
        q = PointedExtension(VERTEX, EDGE, (1, 0))
        self.assertEqual(gtp_equal(p, q, GRAPH), Verdict.FAILS)

    def test_bases_must_match(self):
        p = PointedExtension(VERTEX, EDGE, (1,))
        q = PointedExtension(EDGE, CHERRY, (2,))
        with self.assertRaises(BaseMismatchError):
            gtp_equal(p, q, GRAPH)

    def test_unknown_method(self):
        p = PointedExtension(VERTEX, EDGE, (1,))
        with self.assertRaises(ValueError):
            gtp_equal(p, p, GRAPH, method="oracle")

    def test_tuple_must_lie_in_extension(self):
        with self.assertRaises(ValueError):
            PointedExtension(VERTEX, EDGE, (5,))

    def test_certificates_agree_with_amalgam_search(self):
        mismatches = []
        for klass in (GRAPH, FINSET, KLOCAL):
            for M in klass.members(2):
                pts = realizations(klass, M, 1, M.size + 1)
                for p, q in itertools.combinations(pts, 2):
                    by_cert = gtp_equal(p, q, klass, method="certificate")
                    by_search = gtp_equal(p, q, klass, method="search")
                    if by_cert != by_search:
                        mismatches.append((klass.name, p, q))
        self.assertEqual(mismatches, [])

    def test_chains_reach_past_the_codomain_bound(self):
        # a path 0-1-2 and a cherry at 0 both put 1 next to 0; one amalgam needs 4 vertices
        p = PointedExtension(VERTEX, graph_from_edges(3, [(0, 1), (1, 2)]), (1,))
        q = PointedExtension(VERTEX, CHERRY, (1,))
        one_step = gtp_equal(p, q, GRAPH, SearchBudget(3, max_depth=1), method="search")
        chained = gtp_equal(p, q, GRAPH, SearchBudget(3, max_depth=2), method="search")
        self.assertEqual(one_step, Verdict.FAILS)
        self.assertEqual(chained, Verdict.HOLDS)


# ---------------------------------------------------------------------------
# Counting and tameness
# ---------------------------------------------------------------------------

class TestCounting(unittest.TestCase):

    def test_sets(self):
        for n in range(5):
            tc = count_types(FINSET, points(n), 1)
            self.assertEqual(tc.count, n + 1)
            self.assertTrue(tc.stable)

    def test_pairs_over_empty_set(self):
        self.assertEqual(count_types(FINSET, points(0), 2).count, 2)

    def test_graphs(self):
        # an old vertex, or a new one with any neighbourhood
        self.assertEqual(count_types(GRAPH, VERTEX, 1).count, 3)
        self.assertEqual(count_types(GRAPH, EDGE, 1).count, 6)

    def test_graph_counts_over_small_bases(self):
        # n old vertices, or a new one with one of 2^n neighbourhoods
        for n in range(5):
            for M in (graph_from_edges(n, []), graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])):
                self.assertEqual(count_types(GRAPH, M, 1).count, 2 ** n + n, M)

    def test_to_dict(self):
        data = count_types(FINSET, points(1), 1).to_dict()
        self.assertEqual(data["count"], 2)
        self.assertEqual(len(data["representatives"]), 2)

    def test_graph_tameness(self):
        self.assertEqual(check_tameness(GRAPH, EDGE, 1, 2).verdict, Verdict.HOLDS)
        report = check_tameness(GRAPH, EDGE, 1, 1)
        self.assertEqual(report.verdict, Verdict.FAILS)
        self.assertEqual(report.witnesses[0]["chi"], 1)

    def test_set_tameness(self):
        for n in range(4):
            self.assertEqual(check_tameness(FINSET, points(n), 1, 2).verdict, Verdict.HOLDS, n)

    def test_tameness_sweeps(self):
        self.assertEqual(tameness_sweep(FINSET, 1, 2, 3).verdict, Verdict.HOLDS)
        self.assertEqual(tameness_sweep(GRAPH, 1, 2, 3).verdict, Verdict.HOLDS)


# ---------------------------------------------------------------------------
# Order property
# ---------------------------------------------------------------------------

class TestOrderProperty(unittest.TestCase):

    def test_half_graph_orders_pairs(self):
        # x_i = 2i, y_j = 2j + 1, x_i ~ y_j iff i < j
        half = graph_from_edges(6, [(0, 3), (0, 5), (2, 5)])
        self.assertTrue(is_order_witness(GRAPH, half, [(0, 1), (2, 3), (4, 5)]))
        self.assertFalse(is_order_witness(GRAPH, graph_from_edges(6, []), [(0, 1), (2, 3), (4, 5)]))

    def test_graphs_have_the_order_property(self):
        witness = find_order_property(GRAPH, 2, 3, 6)
        self.assertIsNotNone(witness)
        self.assertEqual(len(witness.tuples), 3)
        self.assertTrue(is_order_witness(GRAPH, witness.M, witness.tuples))

    @unittest.skipUnless(os.environ.get("SIL_SLOW"), "set SIL_SLOW=1 for the size-8 search")
    def test_graphs_order_pairs_of_length_four(self):
        witness = find_order_property(GRAPH, 2, 4, 8)
        self.assertIsNotNone(witness)
        self.assertTrue(is_order_witness(GRAPH, witness.M, witness.tuples))

    def test_sets_do_not(self):
        self.assertIsNone(find_order_property(FINSET, 1, 3, 4))
        for alpha in (1, 2):
            self.assertIsNone(find_order_property(FINSET, alpha, 3, 6), alpha)

    def test_klocal_graphs_do_not(self):
        self.assertIsNone(find_order_property(KLOCAL, 1, 3, 4))
        for alpha in (1, 2):
            self.assertIsNone(find_order_property(KLOCAL, alpha, 3, 6), alpha)


if __name__ == "__main__":
    unittest.main()
