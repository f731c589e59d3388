from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class ReportTable:
    title: str
    columns: List[str]
    rows: List[List[str]] = field(default_factory=list)


@dataclass
class ReportDocument:
    """
    Everything a command reports. Rationals are already rendered as
    "num/den" strings; decimal companions carry their own key.
    """
    command: str
    instance_digest: Optional[str] = None
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: List[ReportTable] = field(default_factory=list)
    timing_seconds: Optional[float] = None

    def add_table(self, title: str, columns: List[str], rows: List[List[Any]]) -> ReportTable:
        table = ReportTable(title, list(columns), [[str(x) for x in row] for row in rows])
        self.tables.append(table)
        return table

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "command": self.command,
            "instance_digest": self.instance_digest,
            "results": {
                "summary": self.summary,
                "tables": [
                    {"title": t.title, "columns": t.columns, "rows": t.rows} for t in self.tables
                ],
            },
        }
        if self.timing_seconds is not None:
            data["timing_seconds"] = round(self.timing_seconds, 6)
        return data


class ReportRenderer(ABC):
    """Abstract base for all report renderers"""

    def __init__(self, name: str, description: str = ""):
        self.name = name
        self.description = description

    @abstractmethod
    def render(self, document: ReportDocument) -> str:
        """Render the document to a string"""
        pass

    def get_output_extension(self) -> str:
        """Return file extension for this format"""
        return f".{self.name}"


def format_cell(value: Any) -> str:
    """One summary value as a table cell; empty lists and None render as '-'."""
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value) if value else "-"
    return "-" if value is None else str(value)
