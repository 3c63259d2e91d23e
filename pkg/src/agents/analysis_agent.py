"""Analysis Agent - Reads L, alternation, rational form and deviation point off a solve."""

from typing import List, Optional

from src.extremal import alternation_scan, extract_rational, imaginary_axis_zero, trace_growth_rate
from src.schemas import AlternationReport, DeviationPoint, GrowthRate, RationalForm, SolveResult
from src.utils import setup_logging

logger = setup_logging(__name__)


class AnalysisAgent:
    """Agent responsible for the extremal-function diagnostics.

    Input: SolveResult
    Output: AlternationReport, RationalForm, DeviationPoint, GrowthRates
    Responsibility: Verify the solve against the structure of the best approximant
    """

    def __init__(self):
        """Initialize the Analysis Agent."""
        logger.info("AnalysisAgent initialized")

    def scan(self, result: SolveResult, grid_size: int) -> AlternationReport:
        report = alternation_scan(result, grid_size)
        logger.info(f"Alternation: {report.count} extrema, L observed {report.L_observed:.12f}")
        return report

    def extract(self, result: SolveResult) -> RationalForm:
        """Fit the rational form; a large verification residual is logged, not raised."""
        form = extract_rational(result, strict=False)
        logger.info(f"Rational form: residual {form.residual:.3e}, condition {form.condition:.3e}")
        return form

    def deviation(self, result: SolveResult, rational: Optional[RationalForm] = None) -> DeviationPoint:
        return imaginary_axis_zero(result, rational)

    def growth(self, result: SolveResult) -> List[GrowthRate]:
        """Growth rates of the imaginary-axis trace at the origin and at infinity."""
        rates = [trace_growth_rate(result, end) for end in ("origin", "infinity")]
        for rate in rates:
            logger.info(f"Growth at {rate.end}: slope {rate.slope:.6f}, expected {rate.expected}")
        return rates
