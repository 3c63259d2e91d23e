"""Template Engine - Looks up output file templates and checks payloads against them."""

from typing import Any, Dict, List

from src.templates import ComparisonTemplate, OracleTemplate, ResultTemplate
from src.utils import setup_logging

logger = setup_logging(__name__)

TEMPLATES = {
    "result": ResultTemplate,
    "oracle": OracleTemplate,
    "comparison": ComparisonTemplate,
}


class TemplateEngine:
    """Agent responsible for the output file layouts.

    Input: report_type, payload
    Output: Template structure, missing fields, validation verdict
    Responsibility: Refuse to write a payload its template does not accept
    """

    def __init__(self):
        """Initialize the Template Engine."""
        self.templates = dict(TEMPLATES)
        logger.info(f"TemplateEngine initialized with {len(self.templates)} templates")

    def _template(self, report_type: str):
        try:
            return self.templates[report_type]
        except KeyError:
            raise ValueError(f"Unknown template: {report_type}") from None

    def get_template(self, report_type: str) -> Dict[str, Any]:
        """Structure of a file template (result, oracle, comparison).

        Raises:
            ValueError: If the template name is not found
        """
        return self._template(report_type).get_structure()

    def missing_fields(self, report_type: str, data: Dict[str, Any]) -> List[str]:
        """Top-level and summary fields the template needs but the payload lacks."""
        structure = self.get_template(report_type)
        missing = [field for field in ["report_type", *structure["required_fields"]] if field not in data]
        summary = data.get("summary") or {}
        # a failed solve has no summary
        if data.get("status") != "failed":
            missing += [f"summary.{field}" for field in structure.get("summary_fields", []) if field not in summary]
        return missing

    def validate_data(self, report_type: str, data: Dict[str, Any]) -> bool:
        """Whether the template accepts the payload.

        Raises:
            ValueError: If the template name is not found
        """
        is_valid = self._template(report_type).validate(data)
        if not is_valid:
            logger.warning(
                f"Payload rejected by {report_type} template; missing: {self.missing_fields(report_type, data) or 'none'}"
            )
        return is_valid

    def check(self, report_type: str, data: Dict[str, Any]) -> Dict[str, Any]:
        """Return the payload unchanged if valid.

        Raises:
            ValueError: If the payload fails template validation
        """
        if not self.validate_data(report_type, data):
            missing = self.missing_fields(report_type, data)
            detail = f" (missing {', '.join(missing)})" if missing else ""
            raise ValueError(
                f"{report_type.capitalize()} payload failed template validation{detail} - cannot proceed with invalid data"
            )
        return data

    def list_available_templates(self) -> list[str]:
        return list(self.templates)
