"""
Report rendering: canonical JSON for machines, pandas text tables for people.
"""

import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

# Configure logging
logger = logging.getLogger(__name__)


def json_text(data: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def table_text(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    """
    Render rows as a fixed-width text table.

    Args:
        rows: one dict per row
        columns: column order (defaults to the keys of the first row)

    Returns:
        str: table text with a trailing newline; "(empty)" for no rows
    """
    if not rows:
        return "(empty)\n"
    df = pd.DataFrame([{k: _cell(v) for k, v in row.items()} for row in rows])
    if columns is not None:
        df = df[[c for c in columns if c in df.columns]]
    return df.to_string(index=False) + "\n"


def _cell(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return "·".join(str(v) for v in value) if value else "()"
    return value


def validation_rows(ps) -> List[Dict[str, Any]]:
    """One row per interior face of a validated scheme."""
    return [{"face": f.id, "source": f.source, "target": f.target,
             "dom": list(f.dom.edges), "cod": list(f.cod.edges)} for f in ps.faces]


def homwise_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
    rows = []
    for row in report["pairs"]:
        rows.append({
            "pair": f"{row['pair'][0]}->{row['pair'][1]}",
            "G chains": row["g_chain_count"],
            "N*F chains": row["nf_chain_count"],
            "certificate": row["certificate_length"],
            "verified": row["verified"],
        })
    return rows
