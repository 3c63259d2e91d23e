"""Report Assembly Agent - Assembles result payloads and CSV traces from blocks and templates."""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.agents.report_logic_engine import ReportLogicEngine
from src.agents.template_engine import TemplateEngine
from src.config import BOUNDARY_SAMPLES, CURVE_SAMPLES
from src.extremal import phi_on_interval, sign_factor
from src.geometry import center_abscissa, curve_height
from src.herglotz import boundary_u, boundary_v, measure_arc, measure_arrays
from src.oracle import ChebyshevSystem
from src.schemas import (
    AlternationReport,
    ComparisonReport,
    DeviationPoint,
    GrowthRate,
    LevelRecord,
    RationalForm,
    RemezSolution,
    RunConfig,
    SolveResult,
)
from src.utils import setup_logging, write_csv

logger = setup_logging(__name__)


class ReportAssemblyAgent:
    """Agent responsible for assembling output files.

    Input: Run config, solve/oracle/comparison results, analysis results
    Output: Template-validated payloads (dict) and CSV trace files
    Responsibility: Combine report blocks with templates into the files a run leaves behind
    """

    def __init__(self):
        """Initialize the Report Assembly Agent."""
        self.block_engine = ReportLogicEngine()
        self.template_engine = TemplateEngine()
        logger.info("ReportAssemblyAgent initialized")

    def _section(self, name: str, subject: Any) -> Dict[str, Any]:
        return self.block_engine.execute_block(name, subject).content

    def assemble_result_payload(
        self,
        config: RunConfig,
        result: Optional[SolveResult],
        alternation: Optional[AlternationReport] = None,
        rational: Optional[RationalForm] = None,
        deviation: Optional[DeviationPoint] = None,
        growth: Optional[List[GrowthRate]] = None,
        history: Sequence[LevelRecord] = (),
        warnings: Sequence[str] = (),
        error: Optional[str] = None,
    ) -> Dict[str, Any]:
        """Assemble the results.json payload.

        A failed solve still yields a payload carrying the level history.

        Returns:
            Result payload dictionary

        Raises:
            ValueError: If the payload fails template validation
        """
        sections = {"problem": self._section("problem", config.problem)}
        summary: Dict[str, Any] = {}

        if result is None:
            status = "failed"
        else:
            status = "converged" if result.converged else "not_converged"
            history = result.level_history
            sections["solve"] = self._section("solve", result)
            summary = {
                "B0_star": result.B0_star,
                "L": 1.0 / math.cosh(result.B0_star),
                "final_level": result.discretization.n,
                "alternation_count": alternation.count if alternation else None,
            }

        optional = (("alternation", alternation), ("rational", rational), ("deviation", deviation), ("growth", growth))
        for name, subject in optional:
            if subject:
                sections[name] = self._section(name, subject)

        payload = {
            "report_type": "result",
            "status": status,
            "summary": summary,
            "sections": sections,
            "level_history": [record.model_dump(mode="json") for record in history],
            "solve_result": result.model_dump(mode="json") if result is not None else None,
            "warnings": sorted(warnings),
            "error": error,
        }

        return self.template_engine.check("result", payload)

    def assemble_oracle_payload(self, config: RunConfig, solution: RemezSolution) -> Dict[str, Any]:
        """Assemble the oracle.json payload.

        Raises:
            ValueError: If the payload fails template validation
        """
        payload = {
            "report_type": "oracle",
            "summary": {
                "E": solution.E,
                "coefficients": list(solution.coefficients),
                "iterations": solution.iterations,
            },
            "sections": {
                "problem": self._section("problem", config.problem),
                "oracle": self._section("oracle", solution),
            },
            "remez_solution": solution.model_dump(mode="json"),
        }

        return self.template_engine.check("oracle", payload)

    def assemble_comparison_payload(
        self,
        config: RunConfig,
        comparison: ComparisonReport,
        solution: RemezSolution,
        result: SolveResult,
    ) -> Dict[str, Any]:
        """Assemble the comparison.json payload.

        Raises:
            ValueError: If the payload fails template validation
        """
        payload = {
            "report_type": "comparison",
            "summary": {
                "L": comparison.L,
                "E": comparison.E,
                "relative_difference": comparison.relative_difference,
                "threshold": comparison.threshold,
                "verdict": "PASS" if comparison.passed else "FAIL",
            },
            "sections": {
                "problem": self._section("problem", config.problem),
                "comparison": self._section("comparison", comparison),
                "oracle": self._section("oracle", solution),
                "solve": self._section("solve", result),
            },
            "comparison": comparison.model_dump(mode="json"),
        }

        return self.template_engine.check("comparison", payload)

    # ========== CSV traces ==========

    def write_traces(
        self,
        result: SolveResult,
        alternation: Optional[AlternationReport],
        out_dir: Path,
    ) -> Dict[str, Path]:
        """Write curve.csv, tips.csv, boundary.csv and alternation.csv.

        Args:
            result: Solve to trace
            alternation: Extreme points to merge into alternation.csv, if available
            out_dir: Output directory

        Returns:
            Mapping of trace name to written path
        """
        files = {
            "curve": out_dir / "curve.csv",
            "tips": out_dir / "tips.csv",
            "boundary": out_dir / "boundary.csv",
            "alternation": out_dir / "alternation.csv",
        }

        count = write_csv(files["curve"], ("u", "v"), self._curve_rows(result))
        logger.info(f"Wrote {count} curve samples: {files['curve']}")

        tips = result.tips
        rows = [
            (k, re, im, residual)
            for k, (re, im, residual) in enumerate(zip(tips.real, tips.imag, tips.curve_residuals), start=1)
        ]
        write_csv(files["tips"], ("k", "re_w", "im_w", "residual"), rows)
        logger.info(f"Wrote {len(rows)} slit tips: {files['tips']}")

        count = write_csv(files["boundary"], ("alpha", "u", "v"), self._boundary_rows(result))
        logger.info(f"Wrote {count} boundary samples: {files['boundary']}")

        count = write_csv(files["alternation"], ("x", "f", "extreme"), self._alternation_rows(result, alternation))
        logger.info(f"Wrote {count} alternation samples: {files['alternation']}")
        return files

    def _curve_rows(self, result: SolveResult):
        u_c = center_abscissa(result.problem)
        offsets = np.linspace(-1.0, 1.0, CURVE_SAMPLES + 2)[1:-1]
        offsets[len(offsets) // 2] = 0.0
        u = u_c + 0.5 * math.pi * offsets
        v = curve_height(u, result.B0_star, u_c)
        return zip(u, v)

    def _boundary_rows(self, result: SolveResult):
        lo, hi = measure_arc(result.measure)
        alphas = np.linspace(lo, hi, BOUNDARY_SAMPLES + 2)[1:-1]
        thetas, _ = measure_arrays(result.measure)
        alphas = alphas[np.min(np.abs(alphas[:, None] - thetas[None, :]), axis=1) > 1e-9]
        u = boundary_u(alphas, result.measure, result.scale)
        v = boundary_v(alphas, result.measure, result.scale)
        return zip(alphas, u, v)

    def _alternation_rows(self, result: SolveResult, alternation: Optional[AlternationReport]):
        grid = ChebyshevSystem(result.problem).grid(BOUNDARY_SAMPLES)
        extreme = set(alternation.points) if alternation else set()
        x = np.unique(np.concatenate([grid, sorted(extreme)]))
        L = 1.0 / math.cosh(result.B0_star)
        f = 1.0 - sign_factor(result) * L * np.cos(phi_on_interval(x, result))
        return [(float(t), float(value), int(float(t) in extreme)) for t, value in zip(x, f)]
