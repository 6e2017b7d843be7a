"""
SIL — Independence Tests

Axiom checkers on the catalog relations, at small bounds.
"""

import sys
import os
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from sil.catalog import graph_from_edges, make_class, make_relation, parse_class_spec
from sil.diagrams import SearchBudget, Square
from sil.independence import (
    IndependenceRelationSpec,
    check_base_monotonicity,
    check_closure_under_equiv,
    check_descent,
    check_existence,
    check_invariance,
    check_isomorphism_lemma,
    check_knf_category,
    check_local_character,
    check_monotonicity,
    check_nfbar_laws,
    check_symmetry,
    check_transitivity,
    check_uniqueness,
    check_witness,
    default_lambda,
    dual_relation,
    nfbar,
)
from sil.reporting import Verdict
from sil.structures import FinStructure, Vocabulary

GRAPH = make_class("graph")
FINSET = make_class("finset")
CHERRY = graph_from_edges(3, [(0, 1), (0, 2)])


def points(n: int) -> FinStructure:
    return FinStructure(Vocabulary(), range(n))


# ---------------------------------------------------------------------------
# Relation objects
# ---------------------------------------------------------------------------

class TestRelationSpec(unittest.TestCase):

    def test_decisions_are_cached(self):
        calls = []

        def decide(sq):
            calls.append(sq)
            return True

        rel = IndependenceRelationSpec("counting", decide, GRAPH)
        sq = Square(CHERRY, {0}, {0, 1}, {0, 2})
        self.assertTrue(rel(sq))
        self.assertTrue(rel(sq.diagram()))
        self.assertEqual(len(calls), 1)

    def test_dual_relation_swaps_sides(self):
        rel = make_relation("left_smaller", GRAPH)
        sq = Square(CHERRY, set(), {0}, {1, 2})
        self.assertTrue(rel(sq))
        self.assertFalse(dual_relation(rel)(sq))

    def test_nfbar_direct_and_search_agree(self):
        rel = make_relation("intersection", FINSET)
        budget = SearchBudget(3)
        for A, B, expected in (({0}, {1}, Verdict.HOLDS), ({0}, {0, 1}, Verdict.FAILS)):
            for method in ("auto", "search"):
                self.assertEqual(nfbar(rel, set(), A, B, points(2), budget, method), expected, method)

    def test_nfbar_over_base(self):
        rel = make_relation("intersection", FINSET)
        self.assertEqual(nfbar(rel, points(1), {0}, {0}, points(2), SearchBudget(3)), Verdict.HOLDS)

    def test_nfbar_needs_a_class(self):
        rel = IndependenceRelationSpec("unbound", lambda sq: True)
        with self.assertRaises(ValueError):
            nfbar(rel, set(), {0}, {1}, points(2), SearchBudget(2))


# ---------------------------------------------------------------------------
# Square axioms
# ---------------------------------------------------------------------------

class TestSquareAxioms(unittest.TestCase):

    def test_no_cross_edges_is_well_behaved(self):
        rel = make_relation("no_cross_edges", GRAPH)
        budget = SearchBudget(3)
        for check in (check_closure_under_equiv, check_existence, check_uniqueness, check_symmetry,
                      check_isomorphism_lemma, check_invariance):
            self.assertEqual(check(rel, GRAPH, budget).verdict, Verdict.HOLDS, check.__name__)
        self.assertEqual(check_transitivity(rel, GRAPH, budget).verdict, Verdict.HOLDS)
        self.assertEqual(check_monotonicity(rel, GRAPH, budget).verdict, Verdict.HOLDS)

    def test_pullbacks_are_not_unique(self):
        report = check_uniqueness(make_relation("pullback_rel", GRAPH), GRAPH, SearchBudget(2))
        self.assertEqual(report.verdict, Verdict.FAILS)
        self.assertIn("first", report.witnesses[0])

    def test_empty_relation_has_no_amalgams(self):
        rel = make_relation("empty", FINSET)
        self.assertEqual(check_existence(rel, FINSET, SearchBudget(2)).verdict, Verdict.FAILS)
        self.assertEqual(check_isomorphism_lemma(rel, FINSET, SearchBudget(2)).verdict, Verdict.FAILS)

    def test_all_squares_exist_but_are_not_unique(self):
        rel = make_relation("all_squares", GRAPH)
        self.assertEqual(check_existence(rel, GRAPH, SearchBudget(2)).verdict, Verdict.HOLDS)
        self.assertEqual(check_uniqueness(rel, GRAPH, SearchBudget(2)).verdict, Verdict.FAILS)

    def test_left_smaller_is_not_symmetric(self):
        rel = make_relation("left_smaller", FINSET)
        report = check_symmetry(rel, FINSET, SearchBudget(2))
        self.assertEqual(report.verdict, Verdict.FAILS)
        self.assertIn("square", report.witnesses[0])

    def test_even_apex_is_invariant(self):
        rel = make_relation("even_apex", FINSET)
        self.assertEqual(check_invariance(rel, FINSET, SearchBudget(3)).verdict, Verdict.HOLDS)

    def test_mixed_bad_breaks_transitivity(self):
        rel = make_relation("mixed_bad", GRAPH)
        report = check_transitivity(rel, GRAPH, SearchBudget(4))
        self.assertEqual(report.verdict, Verdict.FAILS)
        self.assertEqual(report.witnesses[0]["side"], "right")

    def test_iso_type_bad(self):
        rel = make_relation("iso_type_bad", GRAPH)
        budget = SearchBudget(3)
        self.assertEqual(check_monotonicity(rel, GRAPH, budget).verdict, Verdict.FAILS)
        self.assertEqual(check_transitivity(rel, GRAPH, budget).verdict, Verdict.FAILS)

    def test_intersection_on_sets(self):
        rel = make_relation("intersection", FINSET)
        budget = SearchBudget(3)
        for side in ("right", "left"):
            self.assertEqual(check_transitivity(rel, FINSET, budget, side).verdict, Verdict.HOLDS)
            self.assertEqual(check_descent(rel, FINSET, budget, side).verdict, Verdict.HOLDS)
            self.assertEqual(check_base_monotonicity(rel, FINSET, budget, side).verdict, Verdict.HOLDS)
        self.assertEqual(check_knf_category(rel, FINSET, budget).verdict, Verdict.HOLDS)

    def test_bad_side(self):
        with self.assertRaises(ValueError):
            check_transitivity(make_relation("intersection", FINSET), FINSET, SearchBudget(2), "up")

    def test_report_records_bound(self):
        report = check_symmetry(make_relation("intersection", FINSET), FINSET, SearchBudget(2))
        self.assertEqual(report.stats["bound"], 2)
        self.assertGreater(report.stats["configurations"], 0)


# ---------------------------------------------------------------------------
# Set-level nonforking
# ---------------------------------------------------------------------------

class TestNonforkingLaws(unittest.TestCase):

    def test_witness_property(self):
        rel = make_relation("intersection", FINSET)
        self.assertEqual(check_witness(rel, FINSET, 3, SearchBudget(3)).verdict, Verdict.HOLDS)

    def test_local_character(self):
        rel = make_relation("intersection", FINSET)
        report = check_local_character(rel, FINSET, default_lambda(2), SearchBudget(3))
        self.assertEqual(report.verdict, Verdict.HOLDS)

    def test_local_character_fails_without_slack(self):
        rel = make_relation("intersection", FINSET)
        # with lambda = -1 no base is small enough
        report = check_local_character(rel, FINSET, lambda alpha: -1, SearchBudget(1))
        self.assertEqual(report.verdict, Verdict.FAILS)

    def test_laws_for_intersection(self):
        report = check_nfbar_laws(make_relation("intersection", FINSET), FINSET, SearchBudget(2))
        self.assertEqual(report.verdict, Verdict.HOLDS)
        passed = {e["check"] for e in report.audit_log if e["result"] == "PASS"}
        self.assertIn("nfbar_transitivity", passed)

    def test_laws_for_intersection_at_bound_three(self):
        report = check_nfbar_laws(make_relation("intersection", FINSET), FINSET, SearchBudget(3))
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertGreater(report.stats["configurations"], 0)

    def test_laws_for_local_graphs(self):
        klass = parse_class_spec("klocal_graph:2")
        report = check_nfbar_laws(make_relation("no_cross_edges", klass), klass, SearchBudget(3))
        self.assertEqual(report.verdict, Verdict.HOLDS)
        passed = {e["check"] for e in report.audit_log if e["result"] == "PASS"}
        self.assertIn("nfbar_symmetry", passed)


if __name__ == "__main__":
    unittest.main()
