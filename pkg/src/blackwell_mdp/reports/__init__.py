from typing import Dict

from .base import ReportDocument, ReportRenderer, ReportTable, format_cell
from .csv import CsvRenderer
from .json import JsonRenderer
from .markdown import MarkdownRenderer
from .text import TextRenderer

# A registry of all available report renderers
# The key is the format name (e.g., 'json')
RENDERERS: Dict[str, ReportRenderer] = {
    "text": TextRenderer(),
    "json": JsonRenderer(),
    "markdown": MarkdownRenderer(),
    "csv": CsvRenderer(),
}


def get_renderer(format_name: str) -> ReportRenderer:
    """
    Factory function to get a renderer instance by its format name.
    """
    renderer = RENDERERS.get(format_name)
    if not renderer:
        raise ValueError(f"No renderer found for format: {format_name}")
    return renderer


def list_renderers() -> Dict[str, ReportRenderer]:
    """
    Returns the dictionary of all registered renderers.
    """
    return RENDERERS


__all__ = [
    "ReportDocument",
    "ReportRenderer",
    "ReportTable",
    "format_cell",
    "RENDERERS",
    "get_renderer",
    "list_renderers",
]
