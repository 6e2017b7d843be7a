"""
SIL — Diagram Tests

Spans, amalgams, squares and equivalence of amalgams.
"""

import sys
import os
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from sil.catalog import graph_from_edges, make_class
from sil.diagrams import (
    AmalgamationDiagram,
    BudgetError,
    DiagramError,
    SearchBudget,
    Span,
    SpanMismatchError,
    Square,
    amalgam_type,
    amalgams_equivalent,
    check_amalgamation,
    dual_diagram,
    enumerate_amalgams,
    extensions,
    span_key,
    spans,
    squares,
    transport,
)
from sil.reporting import Verdict
from sil.structures import Embedding, FinStructure, Vocabulary, inclusion

GRAPH = make_class("graph")
FINSET = make_class("finset")

VERTEX = graph_from_edges(1, [])
EDGE = graph_from_edges(2, [(0, 1)])
CHERRY = graph_from_edges(3, [(0, 1), (0, 2)])
TRIANGLE = graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])

# two edges glued at vertex 0
EDGE_SPAN = Span(inclusion(VERTEX, EDGE), inclusion(VERTEX, EDGE))


def cherry_amalgam() -> AmalgamationDiagram:
    return AmalgamationDiagram(EDGE_SPAN, Embedding(EDGE, CHERRY, {0: 0, 1: 1}), Embedding(EDGE, CHERRY, {0: 0, 1: 2}))


def triangle_amalgam() -> AmalgamationDiagram:
    return AmalgamationDiagram(EDGE_SPAN, Embedding(EDGE, TRIANGLE, {0: 0, 1: 1}),
                               Embedding(EDGE, TRIANGLE, {0: 0, 1: 2}))


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

class TestConstruction(unittest.TestCase):

    def test_span_legs_share_source(self):
        with self.assertRaises(DiagramError):
            Span(inclusion(VERTEX, EDGE), inclusion(EDGE, CHERRY))

    def test_square_must_commute(self):
        path = graph_from_edges(3, [(0, 1), (1, 2)])
        with self.assertRaises(DiagramError):
            AmalgamationDiagram(EDGE_SPAN, Embedding(EDGE, path, {0: 0, 1: 1}), Embedding(EDGE, path, {0: 1, 1: 2}))

    def test_square_sides_contain_base(self):
        with self.assertRaises(DiagramError):
            Square(EDGE, {0}, {1}, {0, 1})

    def test_inclusion_square(self):
        sq = cherry_amalgam().square
        self.assertEqual(sq.base, frozenset({0}))
        self.assertEqual(sq.left, frozenset({0, 1}))
        self.assertEqual(sq.right, frozenset({0, 2}))
        self.assertEqual(sq.diagram().square, sq)

    def test_dual_diagram_swaps_sides(self):
        d = cherry_amalgam()
        dual = dual_diagram(d)
        self.assertEqual(dual.g1, d.g2)
        self.assertEqual(dual.square, d.square.dual())
        self.assertEqual(dual_diagram(dual), d)

    def test_budget_validation(self):
        with self.assertRaises(BudgetError):
            SearchBudget(0)
        with self.assertRaises(ValueError):
            SearchBudget(3, max_depth=0)
        self.assertEqual(SearchBudget(2).doubled().max_codomain_size, 4)


# ---------------------------------------------------------------------------
# Amalgams
# ---------------------------------------------------------------------------

class TestEnumerateAmalgams(unittest.TestCase):

    def test_two_edges_over_a_vertex(self):
        found = enumerate_amalgams(EDGE_SPAN, GRAPH, SearchBudget(3))
        self.assertEqual(sorted(d.apex.size for d in found), [2, 3, 3])

    def test_budget_limits_apex(self):
        found = enumerate_amalgams(EDGE_SPAN, GRAPH, SearchBudget(2))
        self.assertEqual(len(found), 1)
        self.assertEqual(found[0].apex, EDGE)

    def test_free_amalgam_first(self):
        found = enumerate_amalgams(EDGE_SPAN, GRAPH, SearchBudget(3))
        self.assertEqual(found[0].apex, CHERRY)

    def test_points_over_empty_set(self):
        point = FinStructure(Vocabulary(), [0])
        empty = FinStructure(Vocabulary(), [])
        span = Span(inclusion(empty, point), inclusion(empty, point))
        self.assertEqual(len(enumerate_amalgams(span, FINSET, SearchBudget(2))), 2)
        self.assertEqual(len(enumerate_amalgams(span, FINSET, SearchBudget(1))), 1)

    def test_extensions_of_a_vertex(self):
        self.assertEqual(len(extensions(GRAPH, VERTEX, 2)), 2)


class TestEquivalence(unittest.TestCase):

    def test_identical(self):
        result = amalgams_equivalent(cherry_amalgam(), cherry_amalgam(), GRAPH, SearchBudget(3))
        self.assertEqual(result.verdict, Verdict.HOLDS)

    def test_edge_and_non_edge_differ(self):
        result = amalgams_equivalent(cherry_amalgam(), triangle_amalgam(), GRAPH, SearchBudget(6))
        self.assertEqual(result.verdict, Verdict.FAILS)
        self.assertIsNotNone(result.witness)

    def test_extra_vertex_is_equivalent(self):
        big = graph_from_edges(4, [(0, 1), (0, 2)])
        d2 = AmalgamationDiagram(EDGE_SPAN, Embedding(EDGE, big, {0: 0, 1: 1}), Embedding(EDGE, big, {0: 0, 1: 2}))
        result = amalgams_equivalent(cherry_amalgam(), d2, GRAPH, SearchBudget(4))
        self.assertEqual(result.verdict, Verdict.HOLDS)

    def test_spans_must_match(self):
        other = AmalgamationDiagram(
            Span(inclusion(VERTEX, EDGE), inclusion(VERTEX, VERTEX)),
            Embedding(EDGE, EDGE, {0: 0, 1: 1}),
            Embedding(VERTEX, EDGE, {0: 0}),
        )
        with self.assertRaises(SpanMismatchError):
            amalgams_equivalent(cherry_amalgam(), other, GRAPH, SearchBudget(3))

    def test_amalgam_type(self):
        self.assertNotEqual(amalgam_type(cherry_amalgam(), GRAPH), amalgam_type(triangle_amalgam(), GRAPH))

    def test_transport_onto_same_span(self):
        d = cherry_amalgam()
        self.assertEqual(transport(d, d.span), d)


# ---------------------------------------------------------------------------
# Bounded universes
# ---------------------------------------------------------------------------

class TestUniverses(unittest.TestCase):

    def test_finset_squares(self):
        # 1 + 5 + 15 labeled configurations of at most two points
        self.assertEqual(len(list(squares(FINSET, 2))), 21)

    def test_finset_spans(self):
        self.assertEqual(len(list(spans(FINSET, 2))), 10)

    def test_span_key_separates_sides(self):
        point = FinStructure(Vocabulary(), [0])
        empty = FinStructure(Vocabulary(), [])
        a = Span(inclusion(empty, point), inclusion(empty, empty))
        b = Span(inclusion(empty, empty), inclusion(empty, point))
        self.assertNotEqual(span_key(a), span_key(b))

    def test_amalgamation_holds(self):
        self.assertEqual(check_amalgamation(GRAPH, 3).verdict, Verdict.HOLDS)
        self.assertEqual(check_amalgamation(FINSET, 3).verdict, Verdict.HOLDS)


if __name__ == "__main__":
    unittest.main()
