#!/usr/bin/env python3
"""
Tests for the command-line surface, result files and plot series.
"""

import contextlib
import csv
import io
import json
import os
import sys
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli_app import EXIT_CODES, SpectralLabCLI, fraction_list, int_list
from config.presets import get_preset
from helpers import ConfigHelper
from helpers.constants import (
    EXIT_ERROR, EXIT_FAIL, EXIT_INTERRUPTED, EXIT_PASS, EXIT_UNDECIDED, FAIL, PASS, UNDECIDED,
)
from helpers.exceptions import ExperimentAbortedError
from services import ExperimentConfig, ResultsWriter, RunManifest, emit_config, load_config
from utils import ReportFormatting, emit_plotdata


def run_cli(argv):
    """Run one command with stdout captured; returns (exit code, printed text)"""
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code = SpectralLabCLI().run(argv)
    return code, buffer.getvalue()


class TestReportFormatting(unittest.TestCase):
    """Number rendering and JSON conversion"""

    def test_number_keeps_full_precision(self):
        self.assertEqual(float(ReportFormatting.number(0.1)), 0.1)
        self.assertEqual(float(ReportFormatting.number(1 / 3)), 1 / 3)
        self.assertEqual(ReportFormatting.number(Fraction(1, 4)), "0.25")
        self.assertEqual(ReportFormatting.number(np.int64(7)), "7")
        self.assertEqual(ReportFormatting.number(True), "true")
        self.assertEqual(ReportFormatting.number(None), "")
        self.assertEqual(ReportFormatting.number(float("inf")), "inf")
        self.assertEqual(ReportFormatting.number(float("nan")), "nan")

    def test_jsonable_converts_nested_values(self):
        payload = {
            "fraction": Fraction(1, 2),
            "array": np.array([1.0, 2.0]),
            "complex": 1 + 2j,
            "flag": np.bool_(True),
            1: (np.int32(3),),
            "infinite": float("-inf"),
        }
        converted = ReportFormatting.jsonable(payload)
        self.assertEqual(converted, {
            "fraction": 0.5,
            "array": [1.0, 2.0],
            "complex": [1.0, 2.0],
            "flag": True,
            "1": [3],
            "infinite": "-inf",
        })
        json.dumps(converted)

    def test_flatten_row(self):
        flat = ReportFormatting.flatten_row({"a": {"b": 1}, "c": [1, 2.5]})
        self.assertEqual(flat, {"a.b": 1, "c": "1;2.5"})

    def test_columns_in_first_seen_order(self):
        self.assertEqual(ReportFormatting.columns([{"x": 1, "y": 2}, {"z": 3, "x": 4}]), ["x", "y", "z"])


class TestResultFiles(unittest.TestCase):
    """ResultsWriter, the run manifest, config snapshots and plot series"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directory = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_config_snapshot_round_trip(self):
        config = ExperimentConfig.from_mapping({
            "family": {"name": "bunce_deddens", "alpha": [2, 4, 8]},
            "cocycle": {"kind": "bunce_deddens"},
            "experiment": {"radii": [1, 2], "epsilon": 1.5, "diameter_proxy": 4.0},
            "lab": {"seed": 11, "budget": 5000, "tolerance": 1e-8},
            "output": {"directory": str(self.directory), "format": "csv"},
        })
        path = emit_config(config, self.directory / "snapshot" / "config.json")
        self.assertTrue(path.exists())
        self.assertEqual(load_config(path), config)

    def test_csv_uses_lf_line_endings(self):
        writer = ResultsWriter(self.directory, "csv")
        path = writer.write_csv("rows", [{"radius": 1.0, "count": 3}, {"radius": 2.0, "count": 9}])
        raw = path.read_bytes()
        self.assertNotIn(b"\r\n", raw)
        self.assertEqual(raw.decode("utf-8").splitlines(), ["radius,count", "1,3", "2,9"])

    def test_write_report_in_csv_mode_adds_section_tables(self):
        writer = ResultsWriter(self.directory, "csv")
        report = {
            "doubling": {"rows": [{"radius": 1, "ratio": 3.0}], "verdict": PASS},
            "hausdorff": [{"level": 0, "radius": 1, "enumerated": 0.5}],
            "note": "text",
        }
        paths = writer.write_report("suite", report)
        names = sorted(p.name for p in paths)
        self.assertEqual(names, ["suite.json", "suite_doubling.csv", "suite_hausdorff.csv"])
        with open(self.directory / "suite_hausdorff.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(rows, [{"level": "0", "radius": "1", "enumerated": "0.5"}])
        self.assertEqual(json.loads((self.directory / "suite.json").read_text())["note"], "text")

    def test_json_mode_writes_only_the_report(self):
        writer = ResultsWriter(self.directory, "json")
        paths = writer.write_report("doubling", {"doubling": {"rows": [{"radius": 1}]}})
        self.assertEqual([p.name for p in paths], ["doubling.json"])

    def test_manifest(self):
        writer = ResultsWriter(self.directory, "json")
        manifest = RunManifest("doubling", {"lab": {"seed": 3}}, 3)
        manifest.record("doubling", 12.34567, PASS)
        manifest.finish(PASS)
        data = json.loads(writer.write_manifest(manifest).read_text())
        self.assertEqual(data["command"], "doubling")
        self.assertEqual(data["seed"], 3)
        self.assertEqual(data["timings_ms"], {"doubling": 12.346})
        self.assertEqual(data["verdicts"], {"doubling": PASS})
        self.assertEqual(data["status"], PASS)
        self.assertIsNotNone(data["finished_at"])

    def test_plotdata_for_empty_report_is_header_only(self):
        paths = emit_plotdata({}, self.directory / "plotdata")
        self.assertEqual(len(paths), 5)
        headers = {p.name: p.read_text(encoding="utf-8") for p in paths}
        self.assertEqual(headers["geometry.dat"], "# length_h\tlog_f\n")
        self.assertEqual(headers["spectrum.dat"], "# index\teigenvalue\n")
        self.assertEqual(headers["doubling.dat"], "# radius\tratio\n")
        self.assertEqual(headers["seminorm_ratio.dat"], "# level\tradius\tratio\n")
        self.assertEqual(headers["functional_calculus.dat"], "# level\tdeviation\n")

    def test_plotdata_series(self):
        report = {
            "geometry": {"base": 2, "rows": [
                {"length_h": 0.0, "length_f": 0},
                {"length_h": 0.5, "length_f": 4},
            ]},
            "spectrum": {"eigenvalues": [1.0, -1.0]},
            "doubling": {"rows": [{"radius": 1, "ratio": 3.0}]},
        }
        emit_plotdata(report, self.directory)
        geometry = (self.directory / "geometry.dat").read_text().splitlines()
        self.assertEqual(geometry, ["# length_h\tlog_f", "0.5\t2"])
        spectrum = (self.directory / "spectrum.dat").read_text().splitlines()
        self.assertEqual(spectrum[1:], ["0\t-1", "1\t1"])
        doubling = (self.directory / "doubling.dat").read_text().splitlines()
        self.assertEqual(doubling[1:], ["1\t3"])


class TestArgumentParsing(unittest.TestCase):
    """List parsers and argparse failures"""

    def test_fraction_list(self):
        self.assertEqual(fraction_list("0, 1/2,1"), [Fraction(0), Fraction(1, 2), Fraction(1)])

    def test_int_list(self):
        self.assertEqual(int_list("2,4,8"), [2, 4, 8])

    def test_missing_required_flag_exits(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                SpectralLabCLI().run(["kantorovich", "--positions", "0,1"])

    def test_exit_code_mapping(self):
        self.assertEqual(EXIT_CODES, {PASS: EXIT_PASS, FAIL: EXIT_FAIL, UNDECIDED: EXIT_UNDECIDED})

    def test_suite_presets_take_diameter_and_epsilon_from_lab_config(self):
        helper = ConfigHelper()
        self.assertEqual(helper.get_suite_diameter_proxy(), 8.0)
        self.assertEqual(helper.get_suite_epsilon(), 3.0)
        cli = SpectralLabCLI()
        for command in ("suite-solenoid", "suite-bd"):
            self.assertNotIn("diameter_proxy", get_preset(command)["experiment"])
            config = cli._experiment_config(cli.parser.parse_args([command]))
            self.assertEqual(config.experiment.diameter_proxy, helper.get_suite_diameter_proxy())
            self.assertEqual(config.experiment.epsilon, helper.get_suite_epsilon())


class TestCommands(unittest.TestCase):
    """End-to-end command runs in a temporary output directory"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def read_json(self, name):
        return json.loads((Path(self.out) / name).read_text(encoding="utf-8"))

    def test_kantorovich_on_a_line(self):
        code, printed = run_cli([
            "kantorovich", "--positions", "0,1/3,1,2", "--phi", "1,0,0,0", "--psi", "0,0,0,1",
            "--out", self.out, "--quiet",
        ])
        self.assertEqual(code, EXIT_PASS)
        self.assertIn("kantorovich: PASS", printed)
        report = self.read_json("kantorovich.json")["kantorovich"]
        self.assertEqual(report["distance"], 2.0)
        self.assertEqual(report["exact"], "2")
        self.assertEqual(report["qdiam"], 2.0)
        self.assertEqual(report["table"][0][1], 1 / 3)
        manifest = self.read_json("manifest.json")
        self.assertEqual(manifest["command"], "kantorovich")
        self.assertEqual(manifest["status"], PASS)

    def test_nbar_example_exit_code_matches_verdict(self):
        code, _ = run_cli(["example-nbar", "--n", "4", "--out", self.out, "--seed", "5", "--quiet"])
        report = self.read_json("example_nbar.json")["nbar"]
        self.assertEqual(report["seminorm_values"]["L_inf"], 2.0)
        self.assertEqual(report["seminorm_values"]["L_level"], 4.0)
        self.assertEqual(code, EXIT_CODES[report["verdict"]])
        self.assertEqual(self.read_json("manifest.json")["seed"], 5)

    def test_tunnel_with_mismatched_spaces_is_an_error(self):
        code, _ = run_cli([
            "tunnel", "--left", "0,1", "--right", "0,1/2,1", "--epsilon", "1",
            "--out", self.out, "--quiet",
        ])
        self.assertEqual(code, EXIT_ERROR)
        manifest = self.read_json("manifest.json")
        self.assertEqual(manifest["status"], "error")
        self.assertIn("same number of points", manifest["error"])

    def test_invalid_config_is_an_error(self):
        path = Path(self.out) / "bad.toml"
        path.write_text('[family]\nname = "solenoid"\np = 6\n', encoding="utf-8")
        code, _ = run_cli(["doubling", "--config", str(path), "--out", self.out, "--quiet"])
        self.assertEqual(code, EXIT_ERROR)
        manifest = self.read_json("manifest.json")
        self.assertEqual(manifest["status"], "error")
        self.assertIn("family.p", manifest["error"])
        self.assertFalse((Path(self.out) / "config.json").exists())

    def test_fail_verdict_exit_code(self):
        with patch.object(SpectralLabCLI, "cmd_hausdorff", return_value={"hausdorff": {"verdict": FAIL}}):
            code, printed = run_cli(["hausdorff", "--out", self.out, "--quiet"])
        self.assertEqual(code, EXIT_FAIL)
        self.assertIn("hausdorff: FAIL", printed)
        self.assertEqual(self.read_json("manifest.json")["status"], FAIL)

    def test_undecided_verdict_exit_code(self):
        report = {"seminorm": {"verdict": UNDECIDED}, "geometry": {"verdict": PASS}}
        with patch.object(SpectralLabCLI, "cmd_seminorm", return_value=report):
            code, _ = run_cli(["seminorm", "--out", self.out, "--quiet"])
        self.assertEqual(code, EXIT_UNDECIDED)

    def test_interrupt_exit_code(self):
        with patch.object(SpectralLabCLI, "cmd_hausdorff", side_effect=KeyboardInterrupt):
            code, _ = run_cli(["hausdorff", "--out", self.out, "--quiet"])
        self.assertEqual(code, EXIT_INTERRUPTED)
        self.assertEqual(self.read_json("manifest.json")["status"], "interrupted")

    def test_aborted_suite_writes_partial_results(self):
        error = ExperimentAbortedError("hausdorff failed: boom", {"geometry": {"verdict": PASS}})
        with patch.object(SpectralLabCLI, "cmd_suite", side_effect=error):
            code, _ = run_cli(["suite-solenoid", "--out", self.out, "--quiet"])
        self.assertEqual(code, EXIT_ERROR)
        partial = self.read_json("suite_solenoid_partial.json")
        self.assertEqual(partial, {"geometry": {"verdict": PASS}})

    def test_doubling_on_the_solenoid_preset(self):
        code, _ = run_cli(["doubling", "--family", "solenoid", "--p", "2", "--out", self.out, "--quiet"])
        report = self.read_json("doubling.json")
        counts = [(row["inner"], row["outer"]) for row in report["doubling"]["rows"]]
        self.assertEqual(counts, [(3, 9), (9, 33), (33, 129)])
        self.assertEqual(code, EXIT_CODES[report["doubling"]["verdict"]])
        self.assertTrue((Path(self.out) / "plotdata" / "doubling.dat").exists())


if __name__ == '__main__':
    unittest.main()
