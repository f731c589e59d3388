import io

from rich.console import Console
from rich.table import Table

from .base import ReportDocument, ReportRenderer, format_cell


class TextRenderer(ReportRenderer):
    """Plain console tables, rendered through rich without colour codes."""

    def __init__(self, width: int = 120):
        super().__init__("text", "Human-readable console tables")
        self.width = width

    def render(self, document: ReportDocument) -> str:
        buffer = io.StringIO()
        console = Console(file=buffer, width=self.width, no_color=True, color_system=None, highlight=False)

        summary = Table(title=document.command, show_header=False)
        summary.add_column("key", style="bold")
        summary.add_column("value", overflow="fold")
        if document.instance_digest:
            summary.add_row("instance", document.instance_digest[:16])
        for key, value in document.summary.items():
            summary.add_row(key, format_cell(value))
        if document.timing_seconds is not None:
            summary.add_row("seconds", f"{document.timing_seconds:.3f}")
        console.print(summary)

        for t in document.tables:
            table = Table(title=t.title)
            for column in t.columns:
                table.add_column(column, overflow="fold")
            for row in t.rows:
                table.add_row(*row)
            console.print(table)
        return buffer.getvalue()
