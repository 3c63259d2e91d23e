"""Comparison file template definition."""

from typing import Dict, Any


class ComparisonTemplate:
    """Template for the conformal vs oracle comparison file (comparison.json)."""

    @staticmethod
    def get_structure() -> Dict[str, Any]:
        """Get comparison file template structure.

        Returns:
            Template structure definition
        """
        return {
            "report_type": "comparison",
            "required_fields": [
                "summary",
                "sections",
                "comparison"
            ],
            "summary_fields": [
                "L",
                "E",
                "relative_difference",
                "threshold",
                "verdict"
            ],
            "sections": {
                "comparison": {"dependencies": ["comparison_block"]},
                "oracle": {"dependencies": ["oracle_block"]},
                "solve": {"dependencies": ["solve_block"]}
            }
        }

    @staticmethod
    def validate(data: Dict[str, Any]) -> bool:
        """Validate comparison file data against template.

        Args:
            data: Payload to validate

        Returns:
            True if valid
        """
        required = ["report_type", "summary", "sections", "comparison"]
        if not all(field in data for field in required):
            return False

        if data["report_type"] != "comparison":
            return False

        summary = data["summary"]
        if not all(field in summary for field in ComparisonTemplate.get_structure()["summary_fields"]):
            return False

        return summary["verdict"] in ("PASS", "FAIL")
