"""
SIL — Property Tests

Laws that must hold for every input, checked on generated graphs and
reports.
"""

import sys
import os
import itertools
import json
import unittest

import networkx as nx
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from sil.canon import canonical_key, find_isomorphism
from sil.catalog import graph_from_edges, to_networkx
from sil.reporting import CheckReport, SuiteReport, Verdict

FAST = settings(max_examples=60, deadline=None)


@st.composite
def graphs(draw, max_vertices: int = 6):
    n = draw(st.integers(min_value=0, max_value=max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return graph_from_edges(n, edges)


@st.composite
def relabelled(draw):
    G = draw(graphs())
    targets = draw(st.permutations(range(10, 10 + G.size)))
    return G, G.relabel(dict(zip(G.universe, targets)))


verdicts = st.sampled_from(list(Verdict))
plain = st.integers(min_value=-5, max_value=50) | st.text(max_size=8)


@st.composite
def reports(draw):
    report = CheckReport(draw(st.text(min_size=1, max_size=12)))
    for _ in range(draw(st.integers(min_value=0, max_value=3))):
        report.count()
    for witness in draw(st.lists(st.dictionaries(st.text(max_size=5), plain, max_size=3), max_size=2)):
        report.fail(witness, "generated witness")
    if draw(st.booleans()):
        report.inconclusive(draw(st.text(max_size=20)))
    return report.finish(draw(st.integers(min_value=1, max_value=6)))


# ---------------------------------------------------------------------------
# Canonical keys
# ---------------------------------------------------------------------------

class TestCanonicalKeyLaws(unittest.TestCase):

    @FAST
    @given(relabelled())
    def test_invariant_under_relabelling(self, pair):
        G, H = pair
        self.assertEqual(canonical_key(G), canonical_key(H))
        iso = find_isomorphism(G, H)
        self.assertIsNotNone(iso)
        self.assertTrue(all(((iso[u], iso[v]) in H.rel("E")) for u, v in G.rel("E")))

    @FAST
    @given(graphs(5), graphs(5))
    def test_keys_agree_with_networkx(self, G, H):
        same = canonical_key(G) == canonical_key(H)
        self.assertEqual(same, nx.is_isomorphic(to_networkx(G), to_networkx(H)))


# ---------------------------------------------------------------------------
# Verdicts and reports
# ---------------------------------------------------------------------------

class TestVerdictLaws(unittest.TestCase):

    @given(st.lists(verdicts))
    def test_combine_ignores_order(self, vs):
        self.assertEqual(Verdict.combine(vs), Verdict.combine(reversed(vs)))

    @given(st.lists(verdicts), verdicts)
    def test_combine_is_idempotent(self, vs, v):
        self.assertEqual(Verdict.combine(vs + [v]), Verdict.combine(vs + [v, v]))

    @given(st.lists(verdicts))
    def test_fails_absorbs(self, vs):
        self.assertEqual(Verdict.combine(vs + [Verdict.FAILS]), Verdict.FAILS)
        self.assertEqual(Verdict.combine(vs + [Verdict.HOLDS]), Verdict.combine(vs))


class TestReportLaws(unittest.TestCase):

    @FAST
    @given(reports())
    def test_check_report_survives_json(self, report):
        restored = CheckReport.from_dict(json.loads(json.dumps(report.to_dict())))
        self.assertEqual(restored, report)
        self.assertEqual(restored.verdict, report.verdict)

    @FAST
    @given(st.lists(reports(), max_size=4))
    def test_suite_verdict_is_the_combination(self, parts):
        suite = SuiteReport("generated", parts, {"bound": 3})
        self.assertEqual(suite.verdict, Verdict.combine(r.verdict for r in parts))
        self.assertEqual(SuiteReport.from_dict(json.loads(json.dumps(suite.to_dict()))), suite)


if __name__ == "__main__":
    unittest.main()
