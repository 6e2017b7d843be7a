"""
SIL — File and Limit Tests

Structure files, run profiles and the memory guard.
"""

import sys
import os
import json
import tempfile
import unittest
from unittest import mock

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from sil.catalog import graph_from_edges, make_class, make_relation
from sil.diagrams import SearchBudget
from sil.independence import check_symmetry
from sil.limits import ENV_MAX_MEM, BudgetExhausted, MemoryGuard, guard, ordered_map, set_guard
from sil.profile_loader import ProfileLoader, ProfileLoadError, fallback_profile
from sil.reporting import Verdict
from sil.structure_io import (
    StructureLoadError,
    check_structure_data,
    dump_structure,
    list_structures,
    load_cospan,
    load_diagram,
    load_span,
    load_structure,
    load_structure_dir,
)

ROOT = os.path.join(os.path.dirname(__file__), "..")
STRUCTURES = os.path.join(ROOT, "structures")
PROFILES = os.path.join(ROOT, "profiles")


def write(directory: str, name: str, content) -> str:
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as f:
        f.write(content if isinstance(content, str) else json.dumps(content))
    return path


# ---------------------------------------------------------------------------
# Structure files
# ---------------------------------------------------------------------------

class TestStructureFiles(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_sample_structures(self):
        self.assertEqual(load_structure(os.path.join(STRUCTURES, "path3.json")),
                         graph_from_edges(3, [(0, 1), (1, 2)]))
        self.assertEqual(load_structure(os.path.join(STRUCTURES, "triangle.json")).size, 3)

    def test_sample_diagrams(self):
        span = load_span(os.path.join(STRUCTURES, "edge_span.json"))
        self.assertEqual(span.base.size, 1)
        d = load_diagram(os.path.join(STRUCTURES, "path_square.json"))
        self.assertEqual(d.square.base, frozenset({1}))
        self.assertEqual(load_span(os.path.join(STRUCTURES, "path_square.json")), d.span)
        g1, g2 = load_cospan(os.path.join(STRUCTURES, "path_square.json"))
        self.assertEqual(g1, d.g1)

    def test_directory_skips_diagram_files(self):
        names = list_structures(STRUCTURES)
        self.assertIn("edge_span", names)
        loaded = load_structure_dir(STRUCTURES)
        self.assertEqual(len(loaded), 4)

    def test_missing_file(self):
        with self.assertRaises(StructureLoadError) as ctx:
            load_structure(os.path.join(self.dir, "nothing.json"))
        self.assertIn("not found", str(ctx.exception))

    def test_invalid_json_reports_position(self):
        path = write(self.dir, "broken.json", '{\n  "universe": [0,\n')
        with self.assertRaises(StructureLoadError) as ctx:
            load_structure(path)
        self.assertTrue(str(ctx.exception).startswith(f"{path}:"))
        self.assertIn("invalid JSON", str(ctx.exception))

    def test_field_paths_in_errors(self):
        data = {"vocabulary": {"relations": {"E": 2}}, "universe": [0, -1]}
        self.assertIn("universe[1]", check_structure_data(data)["detail"])
        data = {"vocabulary": {"relations": {"E": "two"}}, "universe": []}
        self.assertIn("vocabulary.relations.E", check_structure_data(data)["detail"])
        self.assertIn("missing", check_structure_data({"universe": []})["detail"])

    def test_function_row_length(self):
        data = {"vocabulary": {"functions": {"f": 1}}, "universe": [0], "functions": {"f": [[0]]}}
        path = write(self.dir, "short.json", data)
        with self.assertRaises(StructureLoadError) as ctx:
            load_structure(path)
        self.assertIn("functions.f[0]", str(ctx.exception))

    def test_tuple_outside_universe(self):
        data = {"vocabulary": {"relations": {"E": 2}}, "universe": [0], "relations": {"E": [[0, 3]]}}
        with self.assertRaises(StructureLoadError):
            load_structure(write(self.dir, "outside.json", data))

    def test_non_embedding_leg(self):
        edge = {"vocabulary": {"relations": {"E": 2}}, "universe": [0, 1], "relations": {"E": [[0, 1], [1, 0]]}}
        gap = {"vocabulary": {"relations": {"E": 2}}, "universe": [0, 1, 2], "relations": {}}
        span = {"kind": "cospan", "left": edge, "right": edge, "apex": gap,
                "g1": [[0, 0], [1, 1]], "g2": [[0, 1], [1, 2]]}
        with self.assertRaises(StructureLoadError) as ctx:
            load_cospan(write(self.dir, "cospan.json", span))
        self.assertIn("field 'g1'", str(ctx.exception))

    def test_wrong_kind(self):
        with self.assertRaises(StructureLoadError):
            load_diagram(os.path.join(STRUCTURES, "edge_span.json"))

    def test_non_commuting_diagram(self):
        with open(os.path.join(STRUCTURES, "path_square.json"), encoding="utf-8") as f:
            data = json.load(f)
        data["g1"] = [[0, 0], [1, 1]]
        for key in ("base", "left", "right", "apex"):
            data[key] = os.path.join(STRUCTURES, data[key])
        with self.assertRaises(StructureLoadError):
            load_diagram(write(self.dir, "square.json", data))

    def test_dump_and_load(self):
        M = graph_from_edges(4, [(0, 1), (2, 3)])
        path = os.path.join(self.dir, "two_edges.json")
        dump_structure(M, path)
        self.assertEqual(load_structure(path), M)


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

class TestProfiles(unittest.TestCase):

    def setUp(self):
        self.loader = ProfileLoader(PROFILES)
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_load_default(self):
        profile = self.loader.load("default")
        self.assertEqual(profile.profile_id, "default")
        self.assertEqual(profile.max_depth, 2)
        self.assertEqual(profile.lambda_fn()(1), 3)
        self.assertIn("closure", profile.axioms)

    def test_load_thorough(self):
        profile = self.loader.load("thorough")
        self.assertEqual(profile.output_format, "json")
        self.assertIn("nfbar_laws", profile.axioms)
        self.assertEqual(profile.max_mem_mib, 4096)

    def test_list_available(self):
        self.assertEqual(self.loader.list_available(), ["default", "thorough"])
        self.assertEqual(ProfileLoader(os.path.join(self.tmp.name, "none")).list_available(), [])

    def test_missing_profile(self):
        with self.assertRaises(ProfileLoadError):
            self.loader.load("nonexistent_profile")

    def test_bad_schema(self):
        with open(os.path.join(PROFILES, "default.json"), encoding="utf-8") as f:
            data = json.load(f)
        loader = ProfileLoader(self.tmp.name)
        for key, value in (("schemaVersion", "2.0"), ("budget", {"maxDepth": 0}), ("output", {"format": "xml"}),
                           ("suite", {"axioms": "closure"})):
            write(self.tmp.name, "bad.json", dict(data, **{key: value}))
            with self.assertRaises(ProfileLoadError, msg=key):
                loader.load("bad")

    def test_invalid_json(self):
        write(self.tmp.name, "broken.json", "{")
        with self.assertRaises(ProfileLoadError):
            ProfileLoader(self.tmp.name).load("broken")

    def test_fallback(self):
        profile = fallback_profile()
        self.assertEqual(profile.profile_id, "default")
        self.assertIsNone(profile.axioms)
        self.assertEqual(profile.theta, 3)


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------

class TestLimits(unittest.TestCase):

    def setUp(self):
        self.saved = guard()

    def tearDown(self):
        set_guard(self.saved)

    def test_env_cap(self):
        with mock.patch.dict(os.environ, {ENV_MAX_MEM: "128"}):
            self.assertEqual(MemoryGuard.from_env(64).max_mib, 128.0)
        with mock.patch.dict(os.environ, {ENV_MAX_MEM: "lots"}):
            self.assertEqual(MemoryGuard.from_env(64).max_mib, 64)
        with mock.patch.dict(os.environ, {ENV_MAX_MEM: ""}):
            self.assertIsNone(MemoryGuard.from_env().max_mib)

    def test_cap_raises(self):
        tight = MemoryGuard(0.001, interval=1)
        with self.assertRaises(BudgetExhausted):
            tight.check()
        MemoryGuard(None, interval=1).check()

    def test_exhausted_check_is_inconclusive(self):
        set_guard(MemoryGuard(0.001, interval=1))
        report = check_symmetry(make_relation("intersection", make_class("finset")), make_class("finset"),
                                SearchBudget(2))
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertTrue(any("exceeds cap" in n for n in report.notes))

    def test_ordered_map_keeps_order(self):
        self.assertEqual(ordered_map(lambda x: x * x, range(10), jobs=4), [x * x for x in range(10)])


if __name__ == "__main__":
    unittest.main()
