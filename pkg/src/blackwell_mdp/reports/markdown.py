from jinja2 import Environment

from .base import ReportDocument, ReportRenderer, format_cell

TEMPLATE = """\
# {{ doc.command }}
{% if doc.instance_digest %}
Instance: `{{ doc.instance_digest }}`
{% endif %}
| key | value |
|---|---|
{% for key, value in doc.summary.items() -%}
| {{ key }} | {{ value | cell }} |
{% endfor %}
{%- for table in doc.tables %}
## {{ table.title }}

| {{ table.columns | join(" | ") }} |
|{% for _ in table.columns %}---|{% endfor %}
{% for row in table.rows -%}
| {{ row | join(" | ") }} |
{% endfor %}
{%- endfor %}
{%- if doc.timing_seconds is not none %}
_Completed in {{ "%.3f" | format(doc.timing_seconds) }} s._
{% endif %}"""


class MarkdownRenderer(ReportRenderer):
    def __init__(self):
        super().__init__("markdown", "Markdown report (jinja2 template)")
        env = Environment(keep_trailing_newline=True, autoescape=False)
        env.filters["cell"] = format_cell
        self.template = env.from_string(TEMPLATE)

    def render(self, document: ReportDocument) -> str:
        return self.template.render(doc=document)

    def get_output_extension(self) -> str:
        return ".md"
