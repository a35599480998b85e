"""
Command-line surface of the spectral lab.
"""
import argparse
import logging
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from config.presets import get_preset
from helpers import ConfigHelper, LoggerHelper, SpectralLabError
from helpers.constants import (
    EXIT_ERROR, EXIT_FAIL, EXIT_INTERRUPTED, EXIT_PASS, EXIT_UNDECIDED, FAIL, FAMILY_CHOICES,
    FAMILY_SOLENOID, PASS, UNDECIDED,
)
from helpers.exceptions import ExperimentAbortedError
from quantum_metric import (
    FiniteQcms, TunnelSpec, distance_table, interval_example, kantorovich, nbar_example, qdiam,
    quotient_check, tunnel_extent_bounds,
)
from services import (
    ConvergenceService, ExperimentConfig, ResultsWriter, RunManifest, emit_config, load_config, worst_verdict,
)
from spectral_triple import spectrum, spectrum_rows
from utils import ReportFormatting, emit_plotdata

logger = LoggerHelper.get_logger(__name__, prefix='cli')

EXIT_CODES = {PASS: EXIT_PASS, FAIL: EXIT_FAIL, UNDECIDED: EXIT_UNDECIDED}

# Largest ball checked against a dense eigensolver
ORACLE_MAX_ELEMENTS = 500
ORACLE_TOLERANCE = 1e-10


def fraction_list(text: str) -> List[Fraction]:
    """'0,1/2,1' -> [0, 1/2, 1]"""
    try:
        return [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class SpectralLabCLI:
    """
    Parses arguments, runs one command and persists its report, plot series
    and run manifest. `run` returns the process exit code.
    """

    def __init__(self):
        self.parser = self._build_parser()
        self.commands: Dict[str, Callable[[argparse.Namespace], Dict[str, Any]]] = {
            "doubling": self.cmd_doubling,
            "hausdorff": self.cmd_hausdorff,
            "spectrum": self.cmd_spectrum,
            "seminorm": self.cmd_seminorm,
            "kantorovich": self.cmd_kantorovich,
            "tunnel": self.cmd_tunnel,
            "example-interval": self.cmd_example_interval,
            "example-nbar": self.cmd_example_nbar,
            "suite-solenoid": self.cmd_suite,
            "suite-bd": self.cmd_suite,
        }
        self.writer: Optional[ResultsWriter] = None

    def _build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", help="TOML or JSON experiment file")
        common.add_argument("--out", help="output directory (default: SPECTRAL_LAB_OUTPUT_DIR or config)")
        common.add_argument("--format", choices=["json", "csv"], help="results format")
        common.add_argument("--seed", type=int, help="random seed")
        common.add_argument("--budget", type=int, help="cardinality budget for enumerations")
        common.add_argument("--tol", type=float, help="relative tolerance for norm estimates")
        verbosity = common.add_mutually_exclusive_group()
        verbosity.add_argument("--quiet", action="store_true", help="only warnings and errors on the console")
        verbosity.add_argument("--verbose", action="store_true", help="debug output on the console")

        group_flags = argparse.ArgumentParser(add_help=False)
        group_flags.add_argument("--family", choices=FAMILY_CHOICES, help="group family when no --config is given")
        group_flags.add_argument("--p", type=int, help="solenoid prime")
        group_flags.add_argument("--d", type=int, help="solenoid rank")
        group_flags.add_argument("--alpha", type=int_list, help="tower prefix, e.g. 2,4,8")

        parser = argparse.ArgumentParser(
            prog="spectral-lab",
            description="Spectral triples on twisted group C*-algebras: geometry, seminorms and convergence checks.",
        )
        sub = parser.add_subparsers(dest="command", required=True)

        for name, text in [
            ("doubling", "ball counts and doubling ratios"),
            ("hausdorff", "Hausdorff distance from balls to the subgroups G_n"),
            ("seminorm", "level seminorms against the window seminorm"),
        ]:
            sub.add_parser(name, parents=[common, group_flags], help=text)

        spectrum_parser = sub.add_parser("spectrum", parents=[common, group_flags], help="truncated Dirac spectrum")
        spectrum_parser.add_argument("--radius", type=float, help="ball radius (default: the largest configured radius)")

        kantorovich_parser = sub.add_parser("kantorovich", parents=[common], help="Kantorovich distance on a line")
        kantorovich_parser.add_argument("--positions", type=fraction_list, required=True)
        kantorovich_parser.add_argument("--phi", type=fraction_list, required=True, help="first probability vector")
        kantorovich_parser.add_argument("--psi", type=fraction_list, required=True, help="second probability vector")
        kantorovich_parser.add_argument("--pairs", choices=["all", "adjacent"], default="all")

        tunnel_parser = sub.add_parser("tunnel", parents=[common], help="identity tunnel between two line spaces")
        tunnel_parser.add_argument("--left", type=fraction_list, required=True, help="positions of the first space")
        tunnel_parser.add_argument("--right", type=fraction_list, required=True, help="positions of the second space")
        tunnel_parser.add_argument("--epsilon", type=Fraction, required=True, help="bridge length")

        interval_parser = sub.add_parser("example-interval", parents=[common], help="[0,1] approximation example")
        interval_parser.add_argument("--n", type=int, default=2)
        interval_parser.add_argument("--grid", type=int, help="grid cells m (default 4n²)")

        nbar_parser = sub.add_parser("example-nbar", parents=[common], help="ℕ̄ approximation example")
        nbar_parser.add_argument("--n", type=int, default=4)
        nbar_parser.add_argument("--truncation", type=int, help="number of finite points kept (default n+4)")
        nbar_parser.add_argument("--epsilon", type=Fraction, help="tunnel bridge length")

        sub.add_parser("suite-solenoid", parents=[common], help="full solenoid suite")
        sub.add_parser("suite-bd", parents=[common], help="full Bunce-Deddens suite")
        return parser

    # Configuration

    def _experiment_config(self, args: argparse.Namespace) -> ExperimentConfig:
        """--config, else the family's suite preset with command-line overrides"""
        if args.config:
            config = load_config(args.config)
            mapping = config.to_dict()
        else:
            family = getattr(args, "family", None)
            preset = args.command if args.command.startswith("suite-") else (
                "suite-solenoid" if family in (None, FAMILY_SOLENOID) else "suite-bd")
            mapping = get_preset(preset)
            helper = ConfigHelper()
            experiment = mapping.setdefault("experiment", {})
            experiment.setdefault("diameter_proxy", helper.get_suite_diameter_proxy())
            experiment.setdefault("epsilon", helper.get_suite_epsilon())
            if family is not None:
                mapping["family"] = {**mapping.get("family", {}), "name": family}
            for key in ("p", "d", "alpha"):
                value = getattr(args, key, None)
                if value is not None:
                    mapping["family"][key] = value
        lab = mapping.setdefault("lab", {})
        for key, flag in (("seed", "seed"), ("budget", "budget"), ("tolerance", "tol")):
            value = getattr(args, flag, None)
            if value is not None:
                lab[key] = value
        output = mapping.setdefault("output", {})
        if args.out:
            output["directory"] = args.out
        if args.format:
            output["format"] = args.format
        return ExperimentConfig.from_mapping(mapping)

    def _service(self, config: ExperimentConfig) -> ConvergenceService:
        sink = None
        if self.writer is not None:
            writer = self.writer
            sink = lambda step, section: writer.write_report(f"partial_{step}", section)
        return ConvergenceService(config, sink=sink)

    # Commands

    def cmd_doubling(self, args: argparse.Namespace) -> Dict[str, Any]:
        with self._service(self.config) as service:
            report = {"doubling": service.doubling()}
            if self.config.family.name != FAMILY_SOLENOID:
                report["tower_counts"] = service.tower_counts()
            report["geometry"] = service.geometry()
        return report

    def cmd_hausdorff(self, args: argparse.Namespace) -> Dict[str, Any]:
        with self._service(self.config) as service:
            return {"hausdorff": service.hausdorff()}

    def cmd_spectrum(self, args: argparse.Namespace) -> Dict[str, Any]:
        with self._service(self.config) as service:
            radius = args.radius if args.radius is not None else self.config.experiment.radii[-1]
            t = service.window(radius)
            eigenvalues = spectrum(t)
            section = {"radius": radius, "size": t.size, "eigenvalues": eigenvalues, "rows": spectrum_rows(t)}
            if t.size <= ORACLE_MAX_ELEMENTS:
                dense = np.linalg.eigvalsh(t.dirac_operator().to_sparse().toarray())
                deviation = float(np.max(np.abs(np.sort(dense) - eigenvalues))) if t.size else 0.0
                section["oracle"] = {"method": "dense-eigvalsh", "max_deviation": deviation}
                section["verdict"] = PASS if deviation <= ORACLE_TOLERANCE * max(1.0, float(np.max(np.abs(dense), initial=0.0))) else FAIL
            return {"spectrum": section, "geometry": service.geometry()}

    def cmd_seminorm(self, args: argparse.Namespace) -> Dict[str, Any]:
        with self._service(self.config) as service:
            return {"seminorm": service.seminorm_comparison()}

    def cmd_kantorovich(self, args: argparse.Namespace) -> Dict[str, Any]:
        q = FiniteQcms.from_line(args.positions, args.pairs)
        distance = kantorovich(q, args.phi, args.psi)
        return {
            "kantorovich": {
                "positions": args.positions, "phi": args.phi, "psi": args.psi,
                "distance": distance, "exact": str(distance) if isinstance(distance, Fraction) else None,
                "qdiam": qdiam(q), "table": distance_table(q),
            }
        }

    def cmd_tunnel(self, args: argparse.Namespace) -> Dict[str, Any]:
        if len(args.left) != len(args.right):
            raise SpectralLabError("the identity tunnel needs spaces with the same number of points")
        left, right = FiniteQcms.from_line(args.left, "adjacent"), FiniteQcms.from_line(args.right, "adjacent")
        tunnel = TunnelSpec(left, right, tuple((k, k) for k in range(left.size)), args.epsilon)
        extent = tunnel_extent_bounds(tunnel, seed=self.seed)
        quotients = [quotient_check(tunnel, side, seed=self.seed) for side in ("left", "right")]
        verdict = PASS if all(q.passed for q in quotients) else FAIL
        return {"tunnel": {"epsilon": args.epsilon, "extent": extent.to_dict(),
                           "quotient_checks": [q.to_dict() for q in quotients], "verdict": verdict}}

    def cmd_example_interval(self, args: argparse.Namespace) -> Dict[str, Any]:
        report = interval_example(args.n, args.grid, seed=self.seed)
        tolerance = 2 / report["grid"]
        values = report["seminorm_values"]
        holds = (abs(values["L_full"] - 1) <= tolerance and abs(values["L_level"] - 1 / args.n) <= tolerance
                 and report["extent_upper"] <= report["extent_limit"])
        report["verdict"] = PASS if holds else FAIL
        return {"interval": report}

    def cmd_example_nbar(self, args: argparse.Namespace) -> Dict[str, Any]:
        report = nbar_example(args.n, args.truncation, args.epsilon, seed=self.seed)
        values = report["seminorm_values"]
        extent_ok = args.n < report["n_threshold"] or report["extent_upper"] <= report["epsilon"]
        holds = (values["L_inf"] == 2 and values["L_level"] == args.n and extent_ok
                 and not report["bridge_builder"]["holds"])
        report["verdict"] = PASS if holds else FAIL
        return {"nbar": report}

    def cmd_suite(self, args: argparse.Namespace) -> Dict[str, Any]:
        with self._service(self.config) as service:
            started = time.perf_counter()
            report = service.run_solenoid_suite() if args.command == "suite-solenoid" else service.run_bd_suite()
            for step, elapsed in report.timings_ms.items():
                self.manifest.record(step, elapsed, report.verdicts.get(step))
            logger.info(f"{args.command} finished in {time.perf_counter() - started:.2f} s")
            return report.to_dict()

    # Driver

    @staticmethod
    def _verdicts(report: Dict[str, Any]) -> Dict[str, str]:
        if "verdicts" in report:
            return dict(report["verdicts"])
        return {name: section["verdict"] for name, section in report.items()
                if isinstance(section, dict) and "verdict" in section}

    def _configure_logging(self, args: argparse.Namespace):
        if args.quiet:
            LoggerHelper.set_console_level(logging.WARNING)
        elif args.verbose:
            LoggerHelper.set_console_level(logging.DEBUG)

    def _setup(self, args: argparse.Namespace) -> Tuple[Path, str]:
        """Config, writer and manifest for the command"""
        try:
            if args.command in ("kantorovich", "tunnel", "example-interval", "example-nbar") and not args.config:
                self.config = ExperimentConfig.from_mapping({
                    "lab": {k: v for k, v in (("seed", args.seed), ("budget", args.budget), ("tolerance", args.tol)) if v is not None},
                    "output": {k: v for k, v in (("directory", args.out), ("format", args.format)) if v is not None},
                })
            else:
                self.config = self._experiment_config(args)
        except SpectralLabError:
            # Invalid configs still leave a manifest behind, next to --out or the default directory
            self.writer = ResultsWriter(args.out, args.format)
            seed = args.seed if args.seed is not None else ConfigHelper().get_seed()
            self.manifest = RunManifest(args.command, {}, seed)
            raise
        self.seed = self.config.lab.seed
        self.writer = ResultsWriter(self.config.output.directory, self.config.output.format)
        emit_config(self.config, self.writer.directory / "config.json")
        self.manifest = RunManifest(args.command, self.config.to_dict(), self.seed)
        return self.writer.directory, self.config.output.format

    def run(self, argv: Optional[List[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        self._configure_logging(args)
        self.manifest = None
        started = time.perf_counter()
        try:
            directory, _ = self._setup(args)
            logger.info(f"Running {args.command}", extra={"command": args.command, "output": str(directory)})
            report = self.commands[args.command](args)
            verdicts = self._verdicts(report)
            verdict = worst_verdict(verdicts.values())
            self.writer.write_report(args.command.replace("-", "_"), report)
            if args.command.startswith("suite-") or args.command in ("spectrum", "doubling"):
                emit_plotdata(report, directory / "plotdata")
            for name, value in verdicts.items():
                self.manifest.verdicts.setdefault(name, value)
            self.manifest.record(args.command, 1000 * (time.perf_counter() - started), verdict)
            self.manifest.finish(verdict)
            for line in ReportFormatting.summary_lines(args.command, verdict, verdicts, 1000 * (time.perf_counter() - started)):
                print(line)
            return EXIT_CODES[verdict]
        except KeyboardInterrupt:
            logger.warning("Interrupted by user")
            if self.manifest is not None:
                self.manifest.finish("interrupted")
            return EXIT_INTERRUPTED
        except ExperimentAbortedError as e:
            logger.error(f"{args.command} aborted: {e}")
            if self.writer is not None:
                self.writer.write_report(f"{args.command.replace('-', '_')}_partial", e.partial)
            if self.manifest is not None:
                self.manifest.finish("error", str(e))
            return EXIT_ERROR
        except (SpectralLabError, ValueError) as e:
            logger.error(f"{args.command} failed: {e}", extra={"error_type": type(e).__name__})
            if self.manifest is not None:
                self.manifest.finish("error", str(e))
            return EXIT_ERROR
        finally:
            if self.manifest is not None and self.writer is not None:
                self.writer.write_manifest(self.manifest)
