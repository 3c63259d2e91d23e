"""Template initialization."""

from src.templates.result_template import ResultTemplate
from src.templates.oracle_template import OracleTemplate
from src.templates.comparison_template import ComparisonTemplate

__all__ = ['ResultTemplate', 'OracleTemplate', 'ComparisonTemplate']
