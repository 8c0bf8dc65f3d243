# utils/helpers.py
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd

from ..core.parser import render_formula
from ..core.proof import LineVerdict, Proof
from ..core.sem_henkin import ComprehensionReport


def report_json(report: Dict[str, Any]) -> str:
    """Deterministic JSON text of a run report."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def format_set(items: Iterable[Any]) -> str:
    """`{0, 2}` style rendering used by the text reports."""
    return "{" + ", ".join(str(item) for item in sorted(items)) + "}"


class ReportExporter:
    """Utility class for turning run results into tables"""

    @staticmethod
    def export_proof_verdicts(verdicts: Sequence[LineVerdict], proof: Optional[Proof] = None) -> pd.DataFrame:
        """One row per proof line"""
        if not verdicts:
            return pd.DataFrame()

        df_data = []
        for verdict in verdicts:
            row = {
                'line': verdict.index,
                'ok': verdict.ok,
                'diagnostic': verdict.diagnostic,
            }
            if proof is not None:
                row['rule'] = str(proof.lines[verdict.index - 1].just)
            df_data.append(row)
        columns = ['line', 'rule', 'ok', 'diagnostic'] if proof is not None else ['line', 'ok', 'diagnostic']
        return pd.DataFrame(df_data, columns=columns)

    @staticmethod
    def export_comprehension_failures(report: ComprehensionReport) -> pd.DataFrame:
        """One row per failing comprehension instance"""
        if not report.failures:
            return pd.DataFrame()

        df_data = []
        for failure in report.failures:
            df_data.append({
                'schema': failure.schema,
                'status': failure.status,
                'instance': render_formula(failure.instance),
            })
        return pd.DataFrame(df_data)

    @staticmethod
    def export_runs(runs: List[Dict]) -> pd.DataFrame:
        """Stored runs, most recent first"""
        if not runs:
            return pd.DataFrame()

        df_data = []
        for run in runs:
            df_data.append({
                'run_id': run.get('id'),
                'date': run.get('created_at'),
                'command': run.get('command'),
                'outcome': run.get('outcome'),
                'exit_status': run.get('exit_status'),
                'elapsed_ms': run.get('elapsed_ms'),
            })
        return pd.DataFrame(df_data)

    @staticmethod
    def export_stats(stats: Dict[str, Any]) -> pd.DataFrame:
        """Budget usage as a two-column table"""
        if not stats:
            return pd.DataFrame()
        return pd.DataFrame([{'counter': key, 'value': stats[key]} for key in sorted(stats)])

    @staticmethod
    def to_text(df: pd.DataFrame) -> str:
        if df.empty:
            return "(no rows)"
        return df.to_string(index=False)
