"""Solve result file template definition."""

from typing import Dict, Any


class ResultTemplate:
    """Template for the solve result file (results.json)."""

    STATUSES = ("converged", "not_converged", "failed")

    @staticmethod
    def get_structure() -> Dict[str, Any]:
        """Get result file template structure.

        Returns:
            Template structure definition
        """
        return {
            "report_type": "result",
            "required_fields": [
                "status",
                "summary",
                "sections",
                "level_history",
                "solve_result",
                "warnings",
                "error"
            ],
            "summary_fields": [
                "B0_star",
                "L",
                "final_level",
                "alternation_count"
            ],
            "sections": {
                "problem": {"dependencies": ["problem_block"]},
                "solve": {"dependencies": ["solve_block"]},
                "alternation": {"dependencies": ["alternation_block"]},
                "rational": {"dependencies": ["rational_block"]},
                "deviation": {"dependencies": ["deviation_block"]},
                "growth": {"dependencies": ["growth_block"]}
            },
            "dependencies": {
                "solve_result": "SolverAgent",
                "analysis": "AnalysisAgent"
            }
        }

    @staticmethod
    def validate(data: Dict[str, Any]) -> bool:
        """Validate result file data against template.

        A failed solve carries its level history but no solve_result.

        Args:
            data: Payload to validate

        Returns:
            True if valid
        """
        required = ResultTemplate.get_structure()["required_fields"] + ["report_type"]
        if not all(field in data for field in required):
            return False

        if data["report_type"] != "result" or data["status"] not in ResultTemplate.STATUSES:
            return False

        if data["status"] == "failed":
            return data["solve_result"] is None and data["error"] is not None

        if data["solve_result"] is None or "problem" not in data["sections"]:
            return False

        return all(field in data["summary"] for field in ["B0_star", "L", "final_level"])
