"""Deterministic writers for verification reports.

Outputs carry no timestamps, hostnames, or absolute paths, so identical
inputs produce byte-identical files.
"""
from __future__ import annotations

import json

from .experiments import VerificationReport

CSV_HEADER = "experiment,lhs,rhs,margin,slack,holds"

__all__ = ["write_jsonl", "write_summary_csv", "format_line", "CSV_HEADER"]


def write_jsonl(reports, path) -> None:
    """One sorted-key JSON object per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(json.dumps(report.to_json_dict(), sort_keys=True))
            fh.write("\n")


def write_summary_csv(reports, path) -> None:
    """Fixed-header summary: experiment,lhs,rhs,margin,slack,holds."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in reports:
            fh.write(
                f"{r.experiment},{r.lhs:.17g},{r.rhs:.17g},"
                f"{r.margin:.17g},{r.slack:.17g},{str(r.holds).lower()}\n"
            )


def format_line(report: VerificationReport) -> str:
    tag = "PASS" if report.holds else "FAIL"
    return (
        f"{tag} {report.experiment}: lhs={report.lhs:.12g} "
        f"rhs={report.rhs:.12g} margin={report.margin:.3e}"
    )