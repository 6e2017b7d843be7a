"""
SIL — Structure Tests

Vocabularies, finite structures, embeddings and abstract classes.
"""

import sys
import os
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from sil.catalog import GRAPH_VOCAB, graph_from_edges, make_class, multigraph, parse_class_spec
from sil.reporting import Verdict
from sil.structures import (
    Embedding,
    FinStructure,
    Morphism,
    StructureError,
    Vocabulary,
    VocabularyMismatchError,
    are_isomorphic,
    check_coherence,
    compose,
    enumerate_embeddings,
    identity,
    inclusion,
    is_embedding,
    is_homomorphism,
)

SET_VOCAB = Vocabulary()
VERTEX = graph_from_edges(1, [])
EDGE = graph_from_edges(2, [(0, 1)])
NON_EDGE = graph_from_edges(2, [])
PATH = graph_from_edges(3, [(0, 1), (1, 2)])
PATH_CENTERED_AT_0 = graph_from_edges(3, [(1, 0), (0, 2)])
TRIANGLE = graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])


# ---------------------------------------------------------------------------
# Vocabularies and structures
# ---------------------------------------------------------------------------

class TestVocabulary(unittest.TestCase):

    def test_symbol_used_twice_raises(self):
        with self.assertRaises(StructureError):
            Vocabulary({"R": 1}, {"R": 1})

    def test_relation_arity_must_be_positive(self):
        with self.assertRaises(StructureError):
            Vocabulary({"R": 0})

    def test_constants_detected(self):
        self.assertTrue(Vocabulary({}, {"c": 0}).has_constants)
        self.assertFalse(GRAPH_VOCAB.has_constants)

    def test_equality_ignores_declaration_order(self):
        self.assertEqual(Vocabulary({"R": 1, "S": 2}), Vocabulary({"S": 2, "R": 1}))


class TestFinStructure(unittest.TestCase):

    def test_tuple_outside_universe_raises(self):
        with self.assertRaises(StructureError):
            FinStructure(GRAPH_VOCAB, [0], {"E": [(0, 1)]})

    def test_partial_function_raises(self):
        vocab = Vocabulary({}, {"f": 1})
        with self.assertRaises(StructureError):
            FinStructure(vocab, [0, 1], {}, {"f": {(0,): 1}})

    def test_empty_universe_with_constant_raises(self):
        vocab = Vocabulary({}, {"c": 0})
        with self.assertRaises(StructureError):
            FinStructure(vocab, [], {}, {"c": {}})

    def test_unknown_symbol_raises(self):
        with self.assertRaises(StructureError):
            FinStructure(GRAPH_VOCAB, [0], {"F": []})

    def test_function_rows_accepted(self):
        vocab = Vocabulary({}, {"f": 1})
        M = FinStructure(vocab, [0, 1], {}, {"f": [[0, 1], [1, 1]]})
        self.assertEqual(M.fn("f")[(0,)], 1)

    def test_induced_keeps_ids(self):
        sub = PATH.induced({1, 2})
        self.assertEqual(sub.universe, (1, 2))
        self.assertIn((1, 2), sub.rel("E"))

    def test_induced_requires_function_closure(self):
        M = multigraph(2, [(0, 1)])
        with self.assertRaises(StructureError):
            M.induced({2})
        self.assertEqual(M.function_closure({2}), frozenset({0, 1, 2}))

    def test_structures_are_hashable_and_equal_by_value(self):
        self.assertEqual(graph_from_edges(2, [(1, 0)]), EDGE)
        self.assertEqual(len({EDGE, graph_from_edges(2, [(0, 1)])}), 1)

    def test_relabel(self):
        moved = EDGE.relabel({0: 5, 1: 7})
        self.assertEqual(moved.universe, (5, 7))
        self.assertIn((7, 5), moved.rel("E"))


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

class TestEmbeddings(unittest.TestCase):

    def test_identity_is_embedding(self):
        self.assertTrue(is_embedding(identity(TRIANGLE)))

    def test_vertex_into_edge(self):
        self.assertTrue(is_embedding(Morphism(VERTEX, EDGE, {0: 0})))

    def test_missing_edge_is_not_reflected(self):
        self.assertFalse(is_embedding(Morphism(NON_EDGE, EDGE, {0: 0, 1: 1})))

    def test_non_injective_map(self):
        self.assertFalse(is_embedding(Morphism(NON_EDGE, VERTEX, {0: 0, 1: 0})))

    def test_homomorphism_need_not_reflect(self):
        self.assertTrue(is_homomorphism(Morphism(NON_EDGE, EDGE, {0: 0, 1: 1})))

    def test_vocabulary_mismatch_is_an_error(self):
        point = FinStructure(SET_VOCAB, [0])
        with self.assertRaises(VocabularyMismatchError):
            is_embedding(Morphism(point, EDGE, {0: 0}))

    def test_embedding_constructor_checks(self):
        with self.assertRaises(StructureError):
            Embedding(NON_EDGE, EDGE, {0: 0, 1: 1})

    def test_map_must_be_total(self):
        with self.assertRaises(StructureError):
            Morphism(EDGE, TRIANGLE, {0: 0})

    def test_compose(self):
        f = inclusion(VERTEX, EDGE)
        g = Embedding(EDGE, TRIANGLE, {0: 2, 1: 0})
        h = compose(g, f)
        self.assertEqual(h(0), 2)
        self.assertTrue(is_embedding(h))

    def test_compose_rejects_mismatched_maps(self):
        with self.assertRaises(StructureError):
            compose(identity(VERTEX), identity(EDGE))

    def test_functions_must_commute(self):
        vocab = Vocabulary({}, {"f": 1})
        M = FinStructure(vocab, [0, 1], {}, {"f": {(0,): 1, (1,): 1}})
        N = FinStructure(vocab, [0, 1], {}, {"f": {(0,): 0, (1,): 1}})
        self.assertFalse(is_embedding(Morphism(M, N, {0: 0, 1: 1})))


class TestEnumerateEmbeddings(unittest.TestCase):

    def test_two_point_set_into_itself(self):
        two = FinStructure(SET_VOCAB, [0, 1])
        self.assertEqual(len(enumerate_embeddings(two, two)), 2)

    def test_vertex_into_edge(self):
        self.assertEqual(len(enumerate_embeddings(VERTEX, EDGE)), 2)

    def test_edge_into_triangle(self):
        found = enumerate_embeddings(EDGE, TRIANGLE)
        self.assertEqual(len(found), 6)
        self.assertTrue(all(is_embedding(e) for e in found))

    def test_order_is_deterministic(self):
        found = enumerate_embeddings(EDGE, TRIANGLE)
        self.assertEqual(found[0].mapping, {0: 0, 1: 1})
        self.assertEqual(found, enumerate_embeddings(EDGE, TRIANGLE))

    def test_edge_into_path(self):
        self.assertEqual(len(enumerate_embeddings(EDGE, PATH)), 4)
        self.assertEqual(enumerate_embeddings(NON_EDGE, EDGE), [])

    def test_partial_assignment_is_extended(self):
        found = enumerate_embeddings(EDGE, TRIANGLE, partial={0: 2})
        self.assertEqual(len(found), 2)
        self.assertTrue(all(e(0) == 2 for e in found))

    def test_larger_source_has_none(self):
        self.assertEqual(enumerate_embeddings(TRIANGLE, EDGE), [])

    def test_function_values_propagate(self):
        M = multigraph(2, [(0, 1)])
        N = multigraph(3, [(0, 1), (1, 2)])
        found = enumerate_embeddings(M, N)
        self.assertEqual(len(found), 2)
        self.assertTrue(all(is_embedding(e) for e in found))


class TestIsomorphism(unittest.TestCase):

    def test_identical_structures(self):
        iso = are_isomorphic(PATH, PATH)
        self.assertEqual(iso.mapping, {0: 0, 1: 1, 2: 2})

    def test_path_and_triangle(self):
        self.assertIsNone(are_isomorphic(PATH, TRIANGLE))

    def test_two_labelings_of_a_path(self):
        iso = are_isomorphic(PATH, PATH_CENTERED_AT_0)
        self.assertIsNotNone(iso)
        self.assertEqual(iso(1), 0)
        self.assertTrue(is_embedding(iso))


# ---------------------------------------------------------------------------
# Abstract classes
# ---------------------------------------------------------------------------

class TestAbstractClasses(unittest.TestCase):

    def test_member_counts(self):
        self.assertEqual(len(make_class("finset").members(3)), 4)
        self.assertEqual(len(make_class("graph").members(3)), 8)
        self.assertEqual(len(parse_class_spec("klocal_graph:2").members(3)), 6)
        self.assertEqual(len(make_class("multigraph").members(2)), 4)
        self.assertEqual(len(parse_class_spec("module:4").members(4)), 4)
        self.assertEqual(len(parse_class_spec("vecspace:2").members(2)), 3)

    def test_graph_strong_subsets(self):
        graph = make_class("graph")
        self.assertEqual(len(graph.strong_subsets(EDGE)), 4)
        self.assertEqual(len(graph.substructures(EDGE)), 4)

    def test_klocal_strong_subsets_are_unions_of_components(self):
        klocal = parse_class_spec("klocal_graph:2")
        self.assertEqual(klocal.strong_subsets(EDGE), [frozenset(), frozenset({0, 1})])
        self.assertFalse(klocal.is_member(PATH))
        self.assertEqual(klocal.closure(graph_from_edges(3, [(0, 1)]), {0}), frozenset({0, 1}))

    def test_strong_embedding(self):
        graph = make_class("graph")
        self.assertTrue(graph.is_strong_embedding(inclusion(VERTEX, EDGE)))
        klocal = parse_class_spec("klocal_graph:2")
        self.assertFalse(klocal.is_strong_embedding(inclusion(VERTEX, EDGE)))

    def test_config_key_is_isomorphism_invariant(self):
        graph = make_class("graph")
        self.assertEqual(graph.config_key(PATH, [{1}]), graph.config_key(PATH_CENTERED_AT_0, [{0}]))
        self.assertNotEqual(graph.config_key(PATH, [{0}]), graph.config_key(PATH, [{1}]))

    def test_module_strong_subsets_are_submodules(self):
        z4 = parse_class_spec("module:4")
        M = z4.members(4)[-1]
        self.assertEqual(M.size, 4)
        for U in z4.strong_subsets(M):
            self.assertTrue(M.is_closed(U))

    def test_vecspace_measures_dimension(self):
        v2 = parse_class_spec("vecspace:2")
        sizes = sorted(v2.size_of(M) for M in v2.members(2))
        self.assertEqual(sizes, [0, 1, 2])


class TestCoherence(unittest.TestCase):

    def test_builtin_classes_are_coherent(self):
        for spec in ("finset", "graph", "klocal_graph:2", "multigraph"):
            report = check_coherence(parse_class_spec(spec), 3)
            self.assertEqual(report.verdict, Verdict.HOLDS, spec)
            self.assertEqual(report.stats["bound"], 3)

    def test_modules_are_coherent(self):
        report = check_coherence(parse_class_spec("module:4"), 4)
        self.assertEqual(report.verdict, Verdict.HOLDS)


if __name__ == "__main__":
    unittest.main()
