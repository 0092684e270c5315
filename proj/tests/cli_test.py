"""Exit codes, text output and JSON output of the cdmg command."""
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CLI = sys.argv.pop(1)
ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
SCHEMAS = ROOT / "schema"


def load_registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((path.name, Resource.from_contents(doc)))
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = load_registry()


def run(*args, env=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=env, timeout=120)


def fixture(name):
    return FIXTURES / f"{name}.graph"


class CliCase(unittest.TestCase):
    def check_json(self, schema, *args, code=0):
        r = run(*args, "--json")
        self.assertEqual(r.returncode, code, r.stderr)
        out = json.loads(r.stdout)
        schema_doc = json.loads((SCHEMAS / f"{schema}.schema.json").read_text())
        jsonschema.Draft202012Validator(schema_doc, registry=REGISTRY).validate(out)
        return out


class Dsep(CliCase):
    def test_example_one(self):
        r = run("dsep", fixture("fig2a"), "--x", "CW", "--y", "CY", "--given", "CX")
        self.assertEqual(r.returncode, 0)
        self.assertEqual(r.stdout, "d-separated: true\n")

    def test_active_path(self):
        r = run("dsep", fixture("fig2a"), "--x", "CW", "--y", "CY")
        self.assertEqual(r.returncode, 0)
        self.assertIn("d-separated: false", r.stdout)
        self.assertIn("active path: CW -> CX -> CY", r.stdout)

    def test_unknown_vertex(self):
        r = run("dsep", fixture("fig2a"), "--x", "CQ", "--y", "CY")
        self.assertEqual(r.returncode, 2)
        self.assertIn("CQ", r.stderr)

    def test_json(self):
        out = self.check_json("dsep", "dsep", fixture("fig2a"), "--x", "CW", "--y", "CY")
        self.assertEqual(out["active_path"]["text"], "CW -> CX -> CY")


class Identify(CliCase):
    def test_front_door(self):
        r = run("identify", fixture("fig2b"))
        self.assertEqual(r.returncode, 0)
        self.assertIn("estimand: sum_{cw} P(cw|cx) * sum_{cx'} P(cy|cw,cx') * P(cx')", r.stdout)

    def test_cycle_certificate(self):
        r = run("identify", fixture("fig3a"))
        self.assertEqual(r.returncode, 3)
        self.assertIn("projection edges used: CX <-> CY", r.stdout)
        self.assertIn("certificate verified: true", r.stdout)

    def test_assumption_warning(self):
        r = run("identify", fixture("fig5"))
        self.assertEqual(r.returncode, 3)
        self.assertIn("Assumption 1 violated: verdict advisory", r.stderr)

    def test_explicit_query(self):
        r = run("identify", fixture("fig2d"), "--do", "CX,CZ", "--on", "CY")
        self.assertEqual(r.returncode, 0)
        self.assertIn("estimand: sum_{cw} P(cy|cw,cx,cz) * P(cw|cz)", r.stdout)

    def test_unknown_on_small_budget(self):
        r = run("identify", fixture("fig2b"), "--budget", "2")
        self.assertEqual(r.returncode, 4)

    def test_json(self):
        for name, code in [("fig2a", 0), ("fig2b", 0), ("fig2d", 0), ("fig3c", 3), ("fig1c", 3)]:
            out = self.check_json("identify", "identify", fixture(name), code=code)
            if code == 3:
                self.assertTrue(out["certificate"]["verified"])
        out = self.check_json("identify", "identify", fixture("fig2b"), "--budget", "2", code=4)
        self.assertTrue(out["search"]["budget_exhausted"])

    def test_fixture_lookup(self):
        env = dict(os.environ, CDMG_FIXTURES=str(FIXTURES))
        r = run("identify", "fig2a.graph", env=env)
        self.assertEqual(r.returncode, 0, r.stderr)
        r = run("identify", "missing.graph", env=env)
        self.assertEqual(r.returncode, 2)

    def test_parse_error(self):
        with tempfile.NamedTemporaryFile("w", suffix=".graph", delete=False) as f:
            f.write("graph admg\nnode A\nA => A\n")
        try:
            r = run("identify", f.name)
            self.assertEqual(r.returncode, 2)
            self.assertIn("line 3", r.stderr)
        finally:
            os.unlink(f.name)

    def test_missing_file(self):
        r = run("identify", "/nonexistent/dir/x.graph")
        self.assertEqual(r.returncode, 2)


class Project(CliCase):
    def test_goldens(self):
        pairs = zip(["fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d"],
                    ["fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f", "fig4g", "fig4h"])
        for src, golden in pairs:
            r = run("project", fixture(src))
            self.assertEqual(r.returncode, 0)
            expected = "".join(l for l in fixture(golden).read_text().splitlines(True) if not l.startswith("#"))
            self.assertEqual(r.stdout, expected, src)

    def test_json(self):
        out = self.check_json("project", "project", fixture("fig2a"))
        self.assertEqual(out["added"], [["CW", "CX"]])


class Hedge(CliCase):
    def test_found_and_absent(self):
        r = run("hedge", fixture("fig3b"))
        self.assertEqual(r.returncode, 0)
        self.assertIn("SC-hedge: found", r.stdout)
        r = run("hedge", fixture("fig2b"))
        self.assertIn("SC-hedge: none", r.stdout)

    def test_json(self):
        out = self.check_json("hedge", "hedge", fixture("fig3d"))
        self.assertTrue(out["hedge"])
        self.check_json("hedge", "hedge", fixture("fig2a"))


class Rules(CliCase):
    def test_rule_two(self):
        r = run("rules", fixture("fig2a"), "--rule", "2", "--y", "CY", "--x", "CX")
        self.assertEqual(r.returncode, 0)
        self.assertIn("applies: true", r.stdout)

    def test_counterexample(self):
        out = self.check_json("rules", "rules", fixture("fig3b"), "--rule", "2", "--y", "CY", "--x", "CX",
                              "--counterexample")
        self.assertFalse(out["applies"])
        self.assertIn("counterexample", out)

    def test_bad_rule(self):
        self.assertEqual(run("rules", fixture("fig2a"), "--rule", "4", "--y", "CY").returncode, 2)


class Oracle(CliCase):
    def test_enumerate_fig5(self):
        r = run("oracle", "enumerate", fixture("fig5"))
        self.assertEqual(r.returncode, 0)
        self.assertTrue(r.stdout.startswith("compatible ADMGs: 2\n"))
        out = self.check_json("enumerate", "oracle", "enumerate", fixture("fig5"))
        self.assertEqual(out["count"], 2)

    def test_enumerate_too_large(self):
        r = run("oracle", "enumerate", fixture("fig2d"), "--size", "2")
        self.assertEqual(r.returncode, 5)

    def test_enumerate_needs_sizes(self):
        self.assertEqual(run("oracle", "enumerate", fixture("fig3a")).returncode, 2)

    def test_probe(self):
        out = self.check_json("probe", "oracle", "probe", fixture("fig3b"), "--size", "2", "--seed", "3")
        self.assertEqual(out["result"], "FoundPair")
        self.assertGreater(out["interventional_gap"], 0.01)
        out = self.check_json("probe", "oracle", "probe", fixture("fig2a"), "--size", "2", "--trials", "2")
        self.assertEqual(out["result"], "Exhausted")
        self.assertEqual(out["seed"], 0)

    def test_strict_requires_seed(self):
        r = run("--strict", "oracle", "probe", fixture("fig3b"), "--size", "2")
        self.assertEqual(r.returncode, 2)
        r = run("--strict", "oracle", "probe", fixture("fig3b"), "--size", "2", "--seed", "1")
        self.assertEqual(r.returncode, 0)

    def test_witness(self):
        out = self.check_json("witness", "oracle", "witness", fixture("fig2a"), "--x", "CW", "--y", "CY", "--size", "2")
        self.assertTrue(out["micro_path_active"])
        out = self.check_json("witness", "oracle", "witness", fixture("fig2a"), "--x", "CW", "--y", "CY",
                              "--given", "CX", "--size", "2")
        self.assertTrue(out["d_separated"])

    def test_deterministic(self):
        args = ["oracle", "probe", fixture("fig3a"), "--size", "2", "--seed", "9", "--json"]
        self.assertEqual(run(*args).stdout, run(*args).stdout)


class Usage(CliCase):
    def test_no_subcommand(self):
        self.assertEqual(run().returncode, 2)

    def test_help(self):
        self.assertEqual(run("--help").returncode, 0)

    def test_threads(self):
        self.assertEqual(run("--threads", "2", "identify", fixture("fig2a")).returncode, 0)


if __name__ == "__main__":
    unittest.main()
