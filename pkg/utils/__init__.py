"""
Utils package for reusable utilities.

This package exports only the main utility helpers:
- ReportFormatting: full-precision numbers and JSON-ready conversion
- emit_plotdata: plain-text plot series for a report
"""

from utils.formatting import ReportFormatting
from utils.plot_data import emit_plotdata

__all__ = [
    'ReportFormatting',
    'emit_plotdata',
]
