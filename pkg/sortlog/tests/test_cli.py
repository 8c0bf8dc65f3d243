import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from sortlog.core.parser import render_proof
from sortlog.database import RunStore
from sortlog.main import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_USAGE, main
from sortlog.tests.generators import proof_corpus

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def data(name: str) -> str:
    return os.path.join(DATA, name)


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.tmp.name, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            status = main(list(argv))
        return status, out.getvalue(), err.getvalue()


class TestParseAndCheck(CliTestCase):
    def test_free_sorts(self):
        status, out, _ = self.run_cli("parse", "-f", data("psa.slf"), "--free-sorts")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(out.strip(), "{0}")

    def test_parse_json(self):
        status, out, _ = self.run_cli("parse", "-f", data("field.slf"), "--format", "json")
        self.assertEqual(status, EXIT_OK)
        report = json.loads(out)
        self.assertEqual(report["free_sorts"], [0])
        self.assertTrue(report["sentence"])
        self.assertEqual(report["vocabulary"], {"mul": [0, 0, 0], "one": [0]})

    def test_check_several_files(self):
        status, out, _ = self.run_cli("check", "-f", data("field.slf"), "-s", data("group2.sls"),
                                      "-H", data("full.slh"), "-p", data("demo.slp"))
        self.assertEqual(status, EXIT_OK)
        self.assertIn("well-formed formula", out)
        self.assertIn("well-formed proof", out)

    def test_parse_error(self):
        path = self.write("bad.slf", "A x:0. x =\n")
        status, out, err = self.run_cli("parse", "-f", path)
        self.assertEqual(status, EXIT_INVALID)
        self.assertEqual(out, "")
        self.assertIn("Syntax", err)
        self.assertIn(f"{path}:1:", err)

    def test_validation_error(self):
        path = self.write("bad.sls", '{"sorts": {"0": ["a"]}, "relations": {"p": [["b"]]}, "vocabulary": {"p": [0]}}')
        status, _, err = self.run_cli("check", "-s", path)
        self.assertEqual(status, EXIT_INVALID)
        self.assertIn("TupleOutOfDomain", err)


class TestUsage(CliTestCase):
    def test_no_arguments(self):
        self.assertEqual(self.run_cli()[0], EXIT_USAGE)

    def test_unknown_command(self):
        self.assertEqual(self.run_cli("bogus")[0], EXIT_USAGE)

    def test_missing_file(self):
        status, _, err = self.run_cli("parse", "-f", os.path.join(self.tmp.name, "absent.slf"))
        self.assertEqual(status, EXIT_USAGE)
        self.assertIn("cannot read", err)

    def test_check_needs_an_input(self):
        self.assertEqual(self.run_cli("check")[0], EXIT_USAGE)

    def test_bad_budget(self):
        status, _, _ = self.run_cli("eval", "-s", data("group2.sls"), "-f", data("isa.slf"), "--bound", "-1")
        self.assertEqual(status, EXIT_USAGE)


class TestEval(CliTestCase):
    def test_definite_verdict(self):
        path = self.write("phi.slf", "A x:0. E y:0. mul(x, y, x)\n")
        status, out, _ = self.run_cli("eval", "-s", data("group2.sls"), "-f", path)
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(out.strip(), "True")

    def test_unknown_is_a_result(self):
        status, out, _ = self.run_cli("eval", "-s", data("group2.sls"), "-f", data("isa.slf"), "--bound", "1")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(out.strip(), "Unknown")

    def test_json_is_deterministic(self):
        argv = ("eval", "-s", data("group2.sls"), "-f", data("isa.slf"), "--bound", "1", "--format", "json")
        first, second = self.run_cli(*argv)[1], self.run_cli(*argv)[1]
        self.assertEqual(first, second)
        report = json.loads(first)
        self.assertEqual(report["verdict"], "Unknown")
        self.assertEqual(report["budget"]["domain_bound"], 1)
        self.assertNotIn("elapsed_ms", report)

    def test_table_format(self):
        path = self.write("phi.slf", "E x:0. one(x)\n")
        status, out, _ = self.run_cli("eval", "-s", data("group2.sls"), "-f", path, "--format", "table")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("counter", out)
        self.assertIn("verdict", out)

    def test_formula_with_free_variables(self):
        path = self.write("open.slf", "one(x:0)\n")
        status, _, err = self.run_cli("eval", "-s", data("group2.sls"), "-f", path)
        self.assertEqual(status, EXIT_INVALID)
        self.assertIn("PreconditionViolation", err)


class TestProve(CliTestCase):
    def test_bundled_proof(self):
        status, out, _ = self.run_cli("prove", data("demo.slp"))
        self.assertEqual(status, EXIT_OK)
        self.assertIn("proof ok", out)

    def test_rejected_line(self):
        path = self.write("bad.slp", '{"theory": [], "lines": [{"formula": "x:0 = y:0", "just": {"rule": "Identity"}}]}')
        status, out, _ = self.run_cli("prove", path)
        self.assertEqual(status, EXIT_INVALID)
        self.assertIn("proof rejected at line(s) 1", out)

    def test_atom_cap(self):
        path = self.write("taut.slp", render_proof(proof_corpus()[3]))
        self.assertEqual(self.run_cli("prove", path)[0], EXIT_OK)
        self.assertEqual(self.run_cli("prove", path, "--atom-cap", "1")[0], EXIT_BUDGET)


class TestHenkinCommands(CliTestCase):
    def test_heval(self):
        path = self.write("phi.slf", "E2 X:(0). A x:0. X(x) <-> P(x)\n")
        self.assertEqual(self.run_cli("heval", "-H", data("full.slh"), "-f", path)[1].strip(), "True")
        self.assertEqual(self.run_cli("heval", "-H", data("deficient.slh"), "-f", path)[1].strip(), "False")

    def test_henkin_check(self):
        status, out, _ = self.run_cli("henkin-check", "-H", data("full.slh"))
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(out.startswith("passed"))
        status, out, _ = self.run_cli("henkin-check", "-H", data("deficient.slh"))
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(out.startswith("failed"))
        self.assertIn("First", out)

    def test_search(self):
        status, out, _ = self.run_cli("search", "-f", data("all_equal.slf"), "--bound", "2")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("countermodel of size 2 found", out)
        status, out, _ = self.run_cli("search", "-f", data("reflexive.slf"), "--bound", "2", "--format", "json")
        self.assertEqual(status, EXIT_OK)
        report = json.loads(out)
        self.assertFalse(report["found"])
        self.assertTrue(report["complete"])


class TestHistory(CliTestCase):
    def test_runs_are_recorded(self):
        db = os.path.join(self.tmp.name, "runs.db")
        self.run_cli("prove", data("demo.slp"), "--history", db)
        path = self.write("bad.slf", "A x:0. x =\n")
        self.run_cli("parse", "-f", data("psa.slf"), "--history", db)
        self.run_cli("parse", "-f", path, "--history", db)

        runs = RunStore(db).list_runs()
        self.assertEqual([run["command"] for run in runs], ["parse", "prove"])
        self.assertEqual(len(RunStore(db).get_proof_lines(runs[1]["id"])), 3)

        status, out, _ = self.run_cli("history", "--history", db, "--summary")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("prove", out)

        status, out, _ = self.run_cli("history", "--history", db, "--show", str(runs[1]["id"]))
        self.assertEqual(status, EXIT_OK)
        self.assertIn('"command": "prove"', out)

    def test_unknown_run(self):
        db = os.path.join(self.tmp.name, "runs.db")
        self.assertEqual(self.run_cli("history", "--history", db, "--show", "7")[0], EXIT_USAGE)


if __name__ == '__main__':
    unittest.main()
