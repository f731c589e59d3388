import csv
import io

from .base import ReportDocument, ReportRenderer


class CsvRenderer(ReportRenderer):
    """Writes the first table only; meant for plot data."""

    def __init__(self):
        super().__init__("csv", "Comma-separated values (plot data)")

    def render(self, document: ReportDocument) -> str:
        if not document.tables:
            raise ValueError(f"Report '{document.command}' has no tabular data for CSV output")
        table = document.tables[0]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows(table.rows)
        return buffer.getvalue()
