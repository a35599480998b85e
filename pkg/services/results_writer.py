"""
Result persistence: JSON and CSV sinks plus the run manifest.
"""
import csv
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from helpers import ConfigHelper, LoggerHelper
from utils.formatting import ReportFormatting

logger = LoggerHelper.get_logger(__name__, prefix='results-writer')

ARTIFACT_VERSION = "1.0.0"


@dataclass
class RunManifest:
    command: str
    config: Dict[str, Any]
    seed: int
    version: str = ARTIFACT_VERSION
    started_at: str = field(default_factory=lambda: time.strftime('%Y-%m-%d %H:%M:%S'))
    finished_at: Optional[str] = None
    timings_ms: Dict[str, float] = field(default_factory=dict)
    verdicts: Dict[str, str] = field(default_factory=dict)
    status: str = "running"
    error: Optional[str] = None

    def record(self, experiment: str, elapsed_ms: float, verdict: Optional[str] = None):
        self.timings_ms[experiment] = round(elapsed_ms, 3)
        if verdict is not None:
            self.verdicts[experiment] = verdict

    def finish(self, status: str, error: Optional[str] = None):
        self.status = status
        self.error = error
        self.finished_at = time.strftime('%Y-%m-%d %H:%M:%S')

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


class ResultsWriter:
    """
    Single writer for one output directory.

    Sub-experiments may call the sinks from worker threads; writes are
    serialized by a lock.
    """

    def __init__(self, directory: Optional[Union[str, Path]] = None, fmt: Optional[str] = None):
        config = ConfigHelper()
        self.directory = Path(directory or config.get_output_dir())
        self.format = fmt or config.get_output_format()
        self._lock = threading.Lock()
        self.directory.mkdir(parents=True, exist_ok=True)

    def write_json(self, name: str, payload: Any) -> Path:
        path = self.directory / f"{name}.json"
        with self._lock:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                json.dump(ReportFormatting.jsonable(payload), f, ensure_ascii=False, indent=2)
                f.write("\n")
        logger.debug(f"Wrote {path}")
        return path

    def write_csv(self, name: str, rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> Path:
        path = self.directory / f"{name}.csv"
        flat = [ReportFormatting.flatten_row(ReportFormatting.jsonable(row)) for row in rows]
        columns = columns or ReportFormatting.columns(flat)
        with self._lock:
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(columns)
                for row in flat:
                    writer.writerow([ReportFormatting.number(row.get(c)) for c in columns])
        logger.debug(f"Wrote {len(flat)} rows to {path}")
        return path

    def write_table(self, name: str, rows: List[Dict[str, Any]]) -> Path:
        """Rows in the configured format"""
        if self.format == "csv":
            return self.write_csv(name, rows)
        return self.write_json(name, rows)

    def write_report(self, name: str, report: Dict[str, Any]) -> List[Path]:
        """
        The whole report as JSON; in CSV mode every list-of-rows section is
        also written as its own table.
        """
        paths = [self.write_json(name, report)]
        if self.format == "csv":
            for section, value in report.items():
                rows = value.get("rows") if isinstance(value, dict) else value
                if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
                    paths.append(self.write_csv(f"{name}_{section}", rows))
        return paths

    def write_manifest(self, manifest: RunManifest) -> Path:
        return self.write_json("manifest", manifest)
