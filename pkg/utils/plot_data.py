"""
Plain-text plot series: one tab-separated file per figure with a '#'
header line. Rendering is left to whatever tool reads the series.
"""
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from helpers import LoggerHelper
from utils.formatting import ReportFormatting

logger = LoggerHelper.get_logger(__name__, prefix='plot-data')

SERIES: Dict[str, Tuple[str, ...]] = {
    "geometry": ("length_h", "log_f"),
    "spectrum": ("index", "eigenvalue"),
    "doubling": ("radius", "ratio"),
    "seminorm_ratio": ("level", "radius", "ratio"),
    "functional_calculus": ("level", "deviation"),
}


def geometry_series(report: Dict[str, Any]) -> List[Sequence]:
    """(𝕃_H, log_base 𝔽) for every non-identity ball row"""
    geometry = report.get("geometry") or {}
    base = geometry.get("base", 2)
    rows = []
    for row in geometry.get("rows", []):
        if row["length_f"] > 0:
            rows.append((row["length_h"], math.log(row["length_f"], base)))
    return sorted(rows)


def spectrum_series(report: Dict[str, Any]) -> List[Sequence]:
    values = sorted(report.get("spectrum", {}).get("eigenvalues", []))
    return [(i, v) for i, v in enumerate(values)]


def doubling_series(report: Dict[str, Any]) -> List[Sequence]:
    rows = (report.get("doubling") or {}).get("rows", [])
    return [(row["radius"], row["ratio"]) for row in rows]


def seminorm_ratio_series(report: Dict[str, Any]) -> List[Sequence]:
    rows = (report.get("seminorm") or {}).get("ratios", [])
    return sorted((row["level"], row["radius"], row["max_ratio"]) for row in rows)


def functional_calculus_series(report: Dict[str, Any]) -> List[Sequence]:
    rows = (report.get("functional_calculus") or {}).get("rows", [])
    return sorted((row["level"], row["deviation"]) for row in rows)


_BUILDERS = {
    "geometry": geometry_series,
    "spectrum": spectrum_series,
    "doubling": doubling_series,
    "seminorm_ratio": seminorm_ratio_series,
    "functional_calculus": functional_calculus_series,
}


def emit_plotdata(report: Dict[str, Any], directory: Union[str, Path]) -> List[Path]:
    """
    Write every series of the report; sections the report lacks produce
    header-only files.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, header in SERIES.items():
        rows = _BUILDERS[name](report)
        path = directory / f"{name}.dat"
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("# " + "\t".join(header) + "\n")
            for row in rows:
                f.write("\t".join(ReportFormatting.number(v) for v in row) + "\n")
        written.append(path)
        logger.debug(f"Wrote {len(rows)} rows to {path}")
    return written
