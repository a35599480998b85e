#!/usr/bin/env python3
"""
Unit tests for experiment configuration and the convergence suites
"""

import unittest
from unittest.mock import patch
import sys
import os

# Add project root to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from group_geometry import SolenoidGroup
from helpers.constants import FAIL, PASS, UNDECIDED
from helpers.exceptions import (
    ConfigParseError, ConfigValidationError, ExperimentAbortedError, FamilyMismatchError, SpectralLabError,
)
from services import ConvergenceService, ExperimentConfig, parse_config_text, worst_verdict
from services.convergence_service import truncate_to_level
from twisted_algebra import AlgebraElement

SUITE_ORDER = ["geometry", "spectrum", "doubling", "hausdorff", "seminorm", "functional_calculus",
               "dynamics", "bridge"]


def solenoid_config(**experiment):
    section = {
        "levels": [0, 1], "radii": [1.0, 2.0], "samples": 2, "support_size": 3,
        "bridge_samples": 2, "dynamics_samples": 2, "times": [0.0, 0.5, 1.0],
        "window_factor": 2.0, "diameter_proxy": 8.0, "epsilon": 3.0,
    }
    section.update(experiment)
    return ExperimentConfig.from_mapping({
        "family": {"name": "solenoid", "p": 2, "d": 1},
        "geometry": {"doubling_radii": [1, 2, 4], "doubling_bound": 4.0},
        "experiment": section,
        "lab": {"seed": 7},
    })


def bd_config():
    return ExperimentConfig.from_mapping({
        "family": {"name": "bunce_deddens", "alpha": [2, 4, 8]},
        "geometry": {"doubling_radii": [1, 2], "doubling_bound": 8.0},
        "cocycle": {"kind": "bunce_deddens"},
        "experiment": {
            "levels": [0, 1], "radii": [1.0, 2.0], "samples": 2, "bridge_samples": 2,
            "dynamics_samples": 2, "window_factor": 2.0, "diameter_proxy": 8.0, "epsilon": 3.0,
        },
        "lab": {"seed": 7},
    })


class TestExperimentConfig(unittest.TestCase):
    """Strict loading and validation"""

    def test_defaults_validate(self):
        config = ExperimentConfig().validate()
        self.assertEqual(config.family.name, "solenoid")
        self.assertEqual(config.experiment.radii, [2.0, 4.0])

    def test_radii_not_increasing(self):
        with self.assertRaises(ConfigValidationError) as ctx:
            solenoid_config(radii=[4.0, 2.0])
        self.assertEqual(ctx.exception.field, "experiment.radii")
        self.assertIn("radii not increasing", str(ctx.exception))

    def test_unknown_key(self):
        with self.assertRaises(ConfigValidationError) as ctx:
            ExperimentConfig.from_mapping({"experiment": {"radius": [1]}})
        self.assertEqual(ctx.exception.field, "experiment.radius")
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"extras": {}})

    def test_type_errors(self):
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"family": {"p": "2"}})
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"experiment": {"trace_zero": 1}})
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"experiment": {"levels": 2}})

    def test_family_and_cocycle_rules(self):
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"family": {"p": 6}})
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"family": {"name": "bunce_deddens", "alpha": [2, 8]}})
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"family": {"name": "bunce_deddens", "alpha": [2]},
                                           "cocycle": {"kind": "skew"}})
        with self.assertRaises(ConfigValidationError):
            ExperimentConfig.from_mapping({"family": {"d": 2}, "cocycle": {"kind": "skew", "theta": [[0]]}})

    def test_epsilon_must_stay_below_half_diameter(self):
        with self.assertRaises(ConfigValidationError) as ctx:
            solenoid_config(epsilon=4.0)
        self.assertEqual(ctx.exception.field, "experiment.epsilon")

    def test_family_shorthand_and_skew_matrix(self):
        config = ExperimentConfig.from_mapping({
            "family": {"name": "solenoid", "d": 2},
            "cocycle": {"kind": "skew", "theta": [[0, "1/3"], ["-1/3", 0]]},
        })
        sigma = config.cocycle.build(config.build_group())
        self.assertEqual(sigma.name, "skew")
        self.assertEqual(ExperimentConfig.from_mapping({"family": "solenoid"}).family.p, 2)

    def test_toml_parse_error_reports_location(self):
        with self.assertRaises(ConfigParseError) as ctx:
            parse_config_text("[family]\nname = \n")
        self.assertEqual(ctx.exception.line, 2)

    def test_json_parse_error_reports_location(self):
        with self.assertRaises(ConfigParseError) as ctx:
            parse_config_text('{"family": }', "json")
        self.assertEqual(ctx.exception.line, 1)

    def test_toml_text_loads(self):
        raw = parse_config_text('[family]\nname = "solenoid"\np = 3\n\n[experiment]\nradii = [1, 3]\n')
        config = ExperimentConfig.from_mapping(raw)
        self.assertEqual(config.family.p, 3)
        self.assertEqual(config.experiment.radii, [1.0, 3.0])


class TestVerdicts(unittest.TestCase):
    """Verdict aggregation and truncation helpers"""

    def test_worst_verdict(self):
        self.assertEqual(worst_verdict([]), PASS)
        self.assertEqual(worst_verdict([PASS, UNDECIDED]), UNDECIDED)
        self.assertEqual(worst_verdict([UNDECIDED, FAIL, PASS]), FAIL)

    def test_truncate_to_level(self):
        group = SolenoidGroup(2)
        f = AlgebraElement(group, {group.element(1): 1.0, group.element('1/2'): 2.0, group.element('1/4'): 3.0})
        self.assertEqual(len(truncate_to_level(f, 1)), 2)
        self.assertEqual(len(truncate_to_level(f, 0)), 1)


class TestConvergenceService(unittest.TestCase):
    """Individual experiments on small configurations"""

    def setUp(self):
        self.service = ConvergenceService(solenoid_config(), max_workers=2)

    def tearDown(self):
        self.service.close()

    def test_geometry_and_spectrum(self):
        geometry = self.service.geometry()
        self.assertEqual(geometry["size"], 9)
        self.assertEqual(geometry["base"], 2)
        self.assertEqual(len(self.service.spectrum()["eigenvalues"]), 18)

    def test_doubling_within_bound(self):
        result = self.service.doubling()
        self.assertEqual(result["verdict"], PASS)
        self.assertTrue(result["within_bound"])

    def test_hausdorff_within_closed_form(self):
        result = self.service.hausdorff()
        self.assertEqual(result["verdict"], PASS)
        self.assertEqual(len(result["rows"]), 4)

    def test_seminorm_comparison(self):
        result = self.service.seminorm_comparison()
        self.assertEqual(result["verdict"], PASS)
        self.assertEqual(result["comparison"]["violations"], 0)
        identity_rows = [row for row in result["rows"] if row["f_id"] == "delta_identity"]
        self.assertTrue(all(row["ratio_undefined"] for row in identity_rows))
        self.assertTrue(all(row["max_ratio"] >= 1 - 1e-9 for row in result["ratios"]))

    def test_seminorm_comparison_on_a_hundred_samples_per_level(self):
        config = solenoid_config(levels=[0, 1], radii=[2.0], samples=100)
        with ConvergenceService(config) as service:
            result = service.seminorm_comparison()
        self.assertEqual(result["comparison"]["samples"], 200)
        self.assertEqual(result["comparison"]["violations"], 0)
        self.assertNotEqual(result["verdict"], FAIL)

    def test_functional_calculus_trend_at_window_eight(self):
        config = solenoid_config(levels=[1, 2, 3, 4], radii=[8.0], function="resolvent")
        with ConvergenceService(config) as service:
            result = service.functional_calculus_convergence()
        self.assertEqual(result["verdict"], PASS)
        self.assertTrue(result["non_increasing"]["8.0"])
        deviations = {row["level"]: row["deviation"] for row in result["rows"]}
        self.assertEqual(sorted(deviations), [1, 2, 3, 4])
        self.assertGreaterEqual(deviations[1], deviations[2])
        self.assertEqual(deviations[3], 0.0)
        self.assertEqual(deviations[4], 0.0)
        self.assertEqual({row["window_size"] for row in result["rows"]}, {129})

    def test_dynamics_lipschitz_on_a_thousand_samples(self):
        with ConvergenceService(solenoid_config(dynamics_samples=1000)) as service:
            result = service.dynamics_deviation()
        self.assertEqual(result["violations"], 0)
        for check in result["lipschitz"]:
            self.assertEqual(check["samples"], 1000)
            self.assertEqual(check["violations"], 0)
        self.assertEqual(result["verdict"], PASS)

    def test_functional_calculus_saturates(self):
        result = self.service.functional_calculus_convergence()
        self.assertEqual(result["verdict"], PASS)
        saturated = [row for row in result["rows"] if row["saturated"]]
        self.assertTrue(saturated)
        self.assertTrue(all(row["deviation"] == 0.0 for row in saturated))

    def test_dynamics_deviation(self):
        result = self.service.dynamics_deviation()
        self.assertEqual(result["verdict"], PASS)
        self.assertTrue(result["non_increasing"])
        self.assertTrue(all(check["passed"] for check in result["lipschitz"]))

    def test_bridge_certificate(self):
        result = self.service.bridge_builder_certificate()
        self.assertEqual(result["verdict"], PASS)
        self.assertEqual({row["side"] for row in result["rows"]}, {"a", "b"})

    def test_bridge_epsilon_range(self):
        with self.assertRaises(SpectralLabError):
            self.service.bridge_builder_certificate(5.0)

    def test_default_diameter_proxy(self):
        config = solenoid_config(diameter_proxy=None, epsilon=None)
        with ConvergenceService(config) as service:
            self.assertEqual(service.diameter_proxy(), 2.0)
            self.assertAlmostEqual(service.epsilon(), 0.8)


class TestSuites(unittest.TestCase):
    """Whole suites, their order and failure handling"""

    def test_solenoid_suite_passes(self):
        steps = []
        with ConvergenceService(solenoid_config(), sink=lambda step, section: steps.append(step)) as service:
            report = service.run_solenoid_suite()
        self.assertEqual(steps, SUITE_ORDER)
        self.assertEqual(report.verdict, PASS)
        payload = report.to_dict()
        self.assertEqual(payload["suite"], "suite-solenoid")
        self.assertEqual(set(payload["timings_ms"]), set(SUITE_ORDER))

    def test_bd_suite_includes_tower_counts(self):
        with ConvergenceService(bd_config()) as service:
            report = service.run_bd_suite()
        self.assertIn("tower_counts", report.sections)
        self.assertEqual(report.sections["tower_counts"]["verdict"], PASS)
        self.assertEqual(report.verdict, PASS)

    def test_suite_family_mismatch(self):
        with ConvergenceService(solenoid_config()) as service:
            with self.assertRaises(FamilyMismatchError):
                service.run_bd_suite()
        with ConvergenceService(bd_config()) as service:
            with self.assertRaises(FamilyMismatchError):
                service.run_solenoid_suite()

    def test_failed_step_keeps_partial_report(self):
        with ConvergenceService(solenoid_config()) as service:
            with patch.object(service, "hausdorff", side_effect=RuntimeError("boom")):
                with self.assertRaises(ExperimentAbortedError) as ctx:
                    service.run_solenoid_suite()
        partial = ctx.exception.partial
        self.assertIn("doubling", partial)
        self.assertNotIn("hausdorff", partial)
        self.assertIn("hausdorff failed", str(ctx.exception))


if __name__ == '__main__':
    unittest.main()
