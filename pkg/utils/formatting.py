"""
Report formatting: JSON-ready conversion, full-precision numbers and
console summaries.
"""
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List

import numpy as np

from helpers.constants import OUTPUT_DIGITS


class ReportFormatting:
    """Static helpers that turn lab results into serializable data"""

    @staticmethod
    def number(value: Any) -> str:
        """Full-precision text for CSV and plot series"""
        if value is None:
            return ""
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating, Fraction)):
            value = float(value)
            if math.isnan(value):
                return "nan"
            if math.isinf(value):
                return "inf" if value > 0 else "-inf"
            return format(value, f".{OUTPUT_DIGITS}g")
        return str(value)

    @staticmethod
    def jsonable(value: Any) -> Any:
        """Recursively convert dataclasses, numpy values, Fractions and complex numbers"""
        if hasattr(value, "to_dict") and callable(value.to_dict):
            return ReportFormatting.jsonable(value.to_dict())
        if is_dataclass(value) and not isinstance(value, type):
            return ReportFormatting.jsonable(asdict(value))
        if isinstance(value, dict):
            return {str(k): ReportFormatting.jsonable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [ReportFormatting.jsonable(v) for v in value]
        if isinstance(value, np.ndarray):
            return [ReportFormatting.jsonable(v) for v in value.tolist()]
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating, Fraction)):
            value = float(value)
            if math.isfinite(value):
                return value
            return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
        if isinstance(value, (complex, np.complexfloating)):
            return [float(value.real), float(value.imag)]
        return value

    @staticmethod
    def flatten_row(row: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
        """Nested dicts become dotted columns; lists become ';'-joined cells"""
        flat = {}
        for key, value in row.items():
            name = f"{prefix}{key}"
            if isinstance(value, dict):
                flat.update(ReportFormatting.flatten_row(value, f"{name}."))
            elif isinstance(value, (list, tuple)):
                flat[name] = ";".join(ReportFormatting.number(v) for v in value)
            else:
                flat[name] = value
        return flat

    @staticmethod
    def columns(rows: Iterable[Dict[str, Any]]) -> List[str]:
        """Column names in first-seen order"""
        seen: Dict[str, None] = {}
        for row in rows:
            for key in row:
                seen.setdefault(key, None)
        return list(seen)

    @staticmethod
    def summary_lines(command: str, verdict: str, verdicts: Dict[str, str], elapsed_ms: float) -> List[str]:
        lines = [f"{command}: {verdict} ({elapsed_ms / 1000:.2f} s)"]
        for name, value in verdicts.items():
            lines.append(f"  {name:<28} {value}")
        return lines
