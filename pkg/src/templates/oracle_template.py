"""Oracle file template definition."""

from typing import Dict, Any


class OracleTemplate:
    """Template for the Remez oracle file (oracle.json)."""

    @staticmethod
    def get_structure() -> Dict[str, Any]:
        """Get oracle file template structure.

        Returns:
            Template structure definition
        """
        return {
            "report_type": "oracle",
            "required_fields": [
                "summary",
                "sections",
                "remez_solution"
            ],
            "summary_fields": [
                "E",
                "coefficients",
                "iterations"
            ],
            "dependencies": {
                "remez_solution": "OracleAgent"
            }
        }

    @staticmethod
    def validate(data: Dict[str, Any]) -> bool:
        """Validate oracle file data against template.

        Args:
            data: Payload to validate

        Returns:
            True if valid
        """
        required = ["report_type", "summary", "sections", "remez_solution"]
        if not all(field in data for field in required):
            return False

        if data["report_type"] != "oracle":
            return False

        summary = data["summary"]
        if not all(field in summary for field in ["E", "coefficients", "iterations"]):
            return False

        return summary["E"] >= 0 and len(data["remez_solution"]["reference"]) == len(summary["coefficients"]) + 1
