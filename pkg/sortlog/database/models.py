# database/models.py
import json
import sqlite3
from typing import Dict, List, Optional


class RunStore:
    """SQLite history of CLI run reports."""

    def __init__(self, db_path: str = "sortlog_history.db"):
        self.db_path = db_path
        self.init_database()

    def init_database(self):
        """Initialize database tables"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()

            # One row per CLI run
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    inputs TEXT NOT NULL,
                    outcome TEXT,
                    exit_status INTEGER NOT NULL,
                    elapsed_ms REAL,
                    report TEXT NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')

            # Per-line verdicts of `prove` runs
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS proof_lines (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER,
                    line INTEGER NOT NULL,
                    ok INTEGER NOT NULL,
                    diagnostic TEXT,
                    FOREIGN KEY (run_id) REFERENCES runs (id)
                )
            ''')

            conn.commit()

    def save_run(self, report: Dict, exit_status: int, elapsed_ms: Optional[float] = None) -> int:
        """Store a run report and, for proofs, its line verdicts"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('''
                INSERT INTO runs (command, inputs, outcome, exit_status, elapsed_ms, report)
                VALUES (?, ?, ?, ?, ?, ?)
            ''', (report["command"], json.dumps(report.get("inputs", {}), sort_keys=True),
                  _outcome(report), exit_status, elapsed_ms, json.dumps(report, sort_keys=True)))
            run_id = cursor.lastrowid
            for line in report.get("lines", []):
                cursor.execute('''
                    INSERT INTO proof_lines (run_id, line, ok, diagnostic)
                    VALUES (?, ?, ?, ?)
                ''', (run_id, line["line"], int(line["ok"]), line["diagnostic"]))
            return run_id

    def get_run(self, run_id: int) -> Optional[Dict]:
        """Get a run by ID, with its report decoded"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('SELECT * FROM runs WHERE id = ?', (run_id,))
            row = cursor.fetchone()
            if row:
                columns = [desc[0] for desc in cursor.description]
                run = dict(zip(columns, row))
                run["report"] = json.loads(run["report"])
                run["inputs"] = json.loads(run["inputs"])
                return run
            return None

    def list_runs(self, command: Optional[str] = None, limit: int = 20) -> List[Dict]:
        """Most recent runs first, optionally for one command"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            query = 'SELECT id, command, inputs, outcome, exit_status, elapsed_ms, created_at FROM runs'
            params: tuple = ()
            if command:
                query += ' WHERE command = ?'
                params = (command,)
            query += ' ORDER BY id DESC LIMIT ?'
            cursor.execute(query, params + (limit,))
            columns = [desc[0] for desc in cursor.description]
            return [dict(zip(columns, row)) for row in cursor.fetchall()]

    def get_proof_lines(self, run_id: int) -> List[Dict]:
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('''
                SELECT line, ok, diagnostic FROM proof_lines
                WHERE run_id = ?
                ORDER BY line
            ''', (run_id,))
            columns = [desc[0] for desc in cursor.description]
            return [dict(zip(columns, row)) for row in cursor.fetchall()]

    def command_summary(self) -> List[Dict]:
        """Run count and failure count per command"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('''
                SELECT command, COUNT(*) AS runs,
                       SUM(CASE WHEN exit_status != 0 THEN 1 ELSE 0 END) AS failures
                FROM runs
                GROUP BY command
                ORDER BY command
            ''')
            columns = [desc[0] for desc in cursor.description]
            return [dict(zip(columns, row)) for row in cursor.fetchall()]


def _outcome(report: Dict) -> Optional[str]:
    for key in ("verdict", "ok", "passed", "found", "well_formed"):
        if key in report:
            return str(report[key])
    return None
