"""
Text rendering of CLI results as pandas tables.
"""

from typing import Dict, List, Sequence, Tuple

import pandas as pd

from config.settings import BOUND_COLUMNS, CENSUS_COLUMNS, PERIODIC_COLUMNS
from models.catalog import CatalogEntry
from models.points import ProjPoint
from models.reports import AnalysisReport, BoundValue, CycleCensus, VerificationReport


def render_table(df: pd.DataFrame) -> str:
    if df.empty:
        return "(none)"
    return df.to_string(index=False)


def periodic_table(points: Sequence[Tuple[str, int]]) -> pd.DataFrame:
    return pd.DataFrame(list(points), columns=PERIODIC_COLUMNS)


def bounds_table(bounds: Sequence[Tuple[str, BoundValue]]) -> pd.DataFrame:
    rows = []
    for name, value in bounds:
        shown = value.display()
        if value.note:
            shown = f"{shown}  ({value.note})"
        rows.append((name, value.kind.value, shown))
    return pd.DataFrame(rows, columns=BOUND_COLUMNS)


def census_table(table: Dict[ProjPoint, ProjPoint], periodic: Sequence[ProjPoint]) -> pd.DataFrame:
    periodic = set(periodic)
    rows = [(str(x), str(table[x]), 'yes' if x in periodic else '') for x in sorted(table)]
    return pd.DataFrame(rows, columns=CENSUS_COLUMNS)


def witness_table(report: VerificationReport) -> pd.DataFrame:
    rows = [
        (w.label, '' if w.prime is None else w.prime, w.lhs, w.rhs, ", ".join(w.points))
        for w in report.witnesses
    ]
    return pd.DataFrame(rows, columns=['check', 'prime', 'lhs', 'rhs', 'points'])


def catalog_table(entries: List[CatalogEntry]) -> pd.DataFrame:
    rows = [
        (f"@{e.key}", e.expression, '' if e.expected_periodic is None else e.expected_periodic, e.description)
        for e in entries
    ]
    return pd.DataFrame(rows, columns=['key', 'expression', 'periodic', 'description'])


def render_bounds(bounds: Sequence[Tuple[str, BoundValue]]) -> str:
    return render_table(bounds_table(bounds))


def render_report(report: VerificationReport) -> str:
    subject = ", ".join(f"{k}={v}" for k, v in sorted(report.subject.items()))
    lines = [f"{report.claim}: {report.status.value}", f"  {subject}"]
    if report.notes:
        lines.append(f"  notes: {report.notes}")
    if report.witnesses:
        lines.append(render_table(witness_table(report)))
    return "\n".join(lines)


def render_census(census: CycleCensus, table: Dict[ProjPoint, ProjPoint]) -> str:
    lengths = ", ".join(str(n) for n in census.cycle_lengths) or "-"
    header = f"p = {census.p}: {census.periodic_count} periodic residues, cycle lengths {lengths}"
    return f"{header}\n{render_table(census_table(table, census.residues))}"


def render_analysis(report: AnalysisReport) -> str:
    bad = ", ".join(str(p) for p in report.bad_primes) or "none"
    critical = ", ".join(
        f"{p}" if m == 1 else f"{p} (x{m})" for p, m in report.critical_points
    ) or "none"
    sections = [
        f"map:            {report.map_descriptor}",
        f"degree:         {report.degree}",
        f"bad primes:     {bad}  (s = {report.s_value})",
        f"critical:       {critical}",
        "",
        f"periodic points (minimal period <= {report.period_cap}): {len(report.periodic_points)}",
        render_table(periodic_table(report.periodic_points)),
    ]
    if report.bounds:
        sections += ["", "bounds:", render_bounds(list(report.bounds.items()))]
    for verification in report.verifications:
        sections += ["", render_report(verification)]
    return "\n".join(sections)
