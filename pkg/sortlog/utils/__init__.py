# utils/__init__.py
from .helpers import ReportExporter, format_set, report_json

__all__ = ['ReportExporter', 'format_set', 'report_json']
