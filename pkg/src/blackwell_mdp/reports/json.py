import json

from .base import ReportDocument, ReportRenderer


class JsonRenderer(ReportRenderer):
    def __init__(self):
        super().__init__("json", "Machine-readable JSON with sorted keys")

    def render(self, document: ReportDocument) -> str:
        return json.dumps(document.to_dict(), indent=2, sort_keys=True) + "\n"
