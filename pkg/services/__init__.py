# Services package

from .experiment_config import ExperimentConfig, load_config, emit_config, parse_config_text
from .convergence_service import ConvergenceService, ConvergenceReport, worst_verdict
from .results_writer import ResultsWriter, RunManifest

__all__ = [
    'ExperimentConfig',
    'load_config',
    'emit_config',
    'parse_config_text',
    'ConvergenceService',
    'ConvergenceReport',
    'worst_verdict',
    'ResultsWriter',
    'RunManifest',
]
