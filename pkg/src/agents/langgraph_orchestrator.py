"""LangGraph Orchestrator - Graph-based run orchestration using LangGraph framework."""

import operator
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, TypedDict

from langgraph.graph import END, StateGraph

from src.agents.analysis_agent import AnalysisAgent
from src.agents.config_parser_agent import ConfigParserAgent
from src.agents.oracle_agent import OracleAgent
from src.agents.report_assembly_agent import ReportAssemblyAgent
from src.agents.solver_agent import SolverAgent
from src.errors import CombMapError, ConfigParseError, NoConvergenceError, ProblemSpecError
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
from src.utils import save_json, setup_logging

logger = setup_logging(__name__)

COMMANDS = ("solve", "oracle", "compare", "trace")


class PipelineState(TypedDict):
    """State object for one CLI run."""
    command: str
    config_path: str
    overrides: Dict[str, Any]
    result_path: Optional[str]
    run_config: Optional[RunConfig]
    remez: Optional[RemezSolution]
    solve_result: Optional[SolveResult]
    level_history: List[LevelRecord]
    alternation: Optional[AlternationReport]
    rational: Optional[RationalForm]
    growth: Optional[List[GrowthRate]]
    deviation: Optional[DeviationPoint]
    comparison: Optional[ComparisonReport]
    trace_files: Dict[str, Path]
    output_files: Dict[str, Path]
    warnings: Annotated[List[str], operator.add]
    error: Optional[str]
    error_kind: Optional[str]


class LangGraphOrchestrator:
    """LangGraph-based orchestrator for solve, oracle, compare and trace runs.

    Implements a state graph workflow with:
    - Command routing through conditional edges
    - Parallel analysis (alternation, rational extraction, growth rates)
    - Explicit upstream error checking in each node
    """

    def __init__(self):
        """Initialize the LangGraph Orchestrator."""
        self.config_parser = ConfigParserAgent()
        self.solver = SolverAgent()
        self.oracle = OracleAgent()
        self.analysis = AnalysisAgent()
        self.assembler = ReportAssemblyAgent()

        self.graph = self._build_graph()
        logger.info("LangGraphOrchestrator initialized with parallel graph topology")

    def _build_graph(self):
        """Build the LangGraph state graph for a run.

        Graph topology:
        parse_config -> [run_oracle] -> run_solver ->
            [scan_alternation, extract_rational, measure_growth] (parallel) ->
            locate_deviation -> [compare_results | write_traces] -> save_outputs -> END

        Returns:
            Compiled StateGraph instance
        """
        workflow = StateGraph(PipelineState)

        workflow.add_node("parse_config", self._parse_config_node)
        workflow.add_node("run_oracle", self._run_oracle_node)
        workflow.add_node("run_solver", self._run_solver_node)
        workflow.add_node("scan_alternation", self._scan_alternation_node)
        workflow.add_node("extract_rational", self._extract_rational_node)
        workflow.add_node("measure_growth", self._measure_growth_node)
        workflow.add_node("locate_deviation", self._locate_deviation_node)
        workflow.add_node("compare_results", self._compare_results_node)
        workflow.add_node("write_traces", self._write_traces_node)
        workflow.add_node("save_outputs", self._save_outputs_node)

        workflow.set_entry_point("parse_config")
        workflow.add_conditional_edges(
            "parse_config",
            self._route_after_parse,
            {"run_oracle": "run_oracle", "run_solver": "run_solver", "end": END},
        )
        workflow.add_conditional_edges(
            "run_oracle",
            self._route_after_oracle,
            {"run_solver": "run_solver", "save_outputs": "save_outputs"},
        )
        workflow.add_conditional_edges(
            "run_solver",
            self._route_after_solver,
            ["scan_alternation", "extract_rational", "measure_growth", "save_outputs"],
        )

        # Fan-in: the deviation point needs the extracted rational form
        workflow.add_edge("scan_alternation", "locate_deviation")
        workflow.add_edge("extract_rational", "locate_deviation")
        workflow.add_edge("measure_growth", "locate_deviation")

        workflow.add_conditional_edges(
            "locate_deviation",
            self._route_after_analysis,
            {"compare_results": "compare_results", "write_traces": "write_traces", "save_outputs": "save_outputs"},
        )
        workflow.add_edge("compare_results", "save_outputs")
        workflow.add_edge("write_traces", "save_outputs")
        workflow.add_edge("save_outputs", END)

        return workflow.compile()

    def run_pipeline(
        self,
        command: str,
        config_path: str,
        overrides: Optional[Dict[str, Any]] = None,
        result_path: Optional[str] = None,
    ) -> PipelineState:
        """Execute one CLI command through the graph.

        Args:
            command: One of solve, oracle, compare, trace
            config_path: Path to the key = value config file
            overrides: Command-line overrides of config values
            result_path: Stored results.json to use instead of solving

        Returns:
            Final pipeline state; error and error_kind are set on failure
        """
        if command not in COMMANDS:
            raise ValueError(f"Unknown command: {command}")

        logger.info("=" * 60)
        logger.info(f"STARTING {command.upper()} RUN")
        logger.info("=" * 60)

        initial_state: PipelineState = {
            "command": command,
            "config_path": config_path,
            "overrides": overrides or {},
            "result_path": result_path,
            "run_config": None,
            "remez": None,
            "solve_result": None,
            "level_history": [],
            "alternation": None,
            "rational": None,
            "growth": None,
            "deviation": None,
            "comparison": None,
            "trace_files": {},
            "output_files": {},
            "warnings": [],
            "error": None,
            "error_kind": None,
        }

        final_state = self.graph.invoke(initial_state)

        if final_state.get("error"):
            logger.error(f"Run failed ({final_state['error_kind']}): {final_state['error']}")
        else:
            logger.info(f"Run completed, wrote {len(final_state['output_files'])} files")
        return final_state

    def _check_upstream_error(self, state: PipelineState, node_name: str) -> bool:
        """Check if upstream nodes have set an error in state.

        Args:
            state: Current pipeline state
            node_name: Name of the current node (for logging)

        Returns:
            True if there's an upstream error, False otherwise
        """
        if state.get("error"):
            logger.warning(f"[NODE: {node_name}] Skipping due to upstream error: {state['error']}")
            return True
        return False

    # ========== Routing ==========

    def _route_after_parse(self, state: PipelineState) -> str:
        if state.get("error"):
            return "end"
        return "run_oracle" if state["command"] in ("oracle", "compare") else "run_solver"

    def _route_after_oracle(self, state: PipelineState) -> str:
        if state.get("error") or state["command"] == "oracle":
            return "save_outputs"
        return "run_solver"

    def _route_after_solver(self, state: PipelineState) -> List[str]:
        if state.get("error"):
            return ["save_outputs"]
        return ["scan_alternation", "extract_rational", "measure_growth"]

    def _route_after_analysis(self, state: PipelineState) -> str:
        if state.get("error"):
            return "save_outputs"
        if state["command"] == "compare":
            return "compare_results"
        if state["command"] == "trace":
            return "write_traces"
        return "save_outputs"

    # ========== Graph Node Functions ==========

    def _parse_config_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Parse and validate the run config."""
        logger.info("[NODE: parse_config] Parsing run config...")

        try:
            config = self.config_parser.parse(state["config_path"], state["overrides"])
            return {"run_config": config}
        except (ConfigParseError, ProblemSpecError) as e:
            logger.error(f"Failed to parse config: {str(e)}")
            return {"error": f"{type(e).__name__}: {str(e)}", "error_kind": "config"}

    def _run_oracle_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Compute the Remez ground truth."""
        logger.info("[NODE: run_oracle] Running Remez exchange...")

        if self._check_upstream_error(state, "run_oracle"):
            return {}

        try:
            config = state["run_config"]
            return {"remez": self.oracle.solve(config.problem, config.grid)}
        except CombMapError as e:
            logger.error(f"Oracle failed: {str(e)}")
            return {"error": f"{type(e).__name__}: {str(e)}", "error_kind": "numerical"}

    def _run_solver_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Solve the conformal map, or reload a stored solve."""
        logger.info("[NODE: run_solver] Solving accessory-parameter problem...")

        if self._check_upstream_error(state, "run_solver"):
            return {}

        if state.get("result_path"):
            try:
                return {"solve_result": self.solver.load(state["result_path"])}
            except ConfigParseError as e:
                logger.error(f"Failed to load stored result: {str(e)}")
                return {"error": f"{type(e).__name__}: {str(e)}", "error_kind": "config"}

        try:
            result = self.solver.solve(state["run_config"])
        except NoConvergenceError as e:
            logger.error(f"Solver failed: {str(e)}")
            return {
                "error": f"NoConvergence: {str(e)}",
                "error_kind": "numerical",
                "level_history": list(e.history),
            }
        except CombMapError as e:
            logger.error(f"Solver failed: {str(e)}")
            return {"error": f"{type(e).__name__}: {str(e)}", "error_kind": "numerical"}

        update: Dict[str, Any] = {"solve_result": result, "level_history": list(result.level_history)}
        if not result.converged:
            update["error"] = (
                f"NoConvergence: B0 did not settle to {state['run_config'].tol_B0} "
                f"over levels {list(state['run_config'].schedule)}"
            )
            update["error_kind"] = "numerical"
        return update

    def _scan_alternation_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Count the extrema of f on [a, 1] (parallel)."""
        logger.info("[NODE: scan_alternation] Scanning alternation...")

        if self._check_upstream_error(state, "scan_alternation"):
            return {}

        try:
            report = self.analysis.scan(state["solve_result"], state["run_config"].grid)
            return {"alternation": report}
        except CombMapError as e:
            logger.warning(f"Alternation scan failed: {str(e)}")
            return {"warnings": [f"alternation: {type(e).__name__}: {str(e)}"]}

    def _extract_rational_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Extract the rational coefficients (parallel)."""
        logger.info("[NODE: extract_rational] Extracting rational form...")

        if self._check_upstream_error(state, "extract_rational"):
            return {}

        try:
            form = self.analysis.extract(state["solve_result"])
            update: Dict[str, Any] = {"rational": form}
            if form.residual is not None and form.residual > 1e-6:
                update["warnings"] = [f"rational: verification residual {form.residual:.3e}"]
            return update
        except CombMapError as e:
            logger.warning(f"Rational extraction failed: {str(e)}")
            return {"warnings": [f"rational: {type(e).__name__}: {str(e)}"]}

    def _measure_growth_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Pole-order growth rates of the imaginary-axis trace (parallel)."""
        logger.info("[NODE: measure_growth] Measuring growth rates...")

        if self._check_upstream_error(state, "measure_growth"):
            return {}

        try:
            return {"growth": self.analysis.growth(state["solve_result"])}
        except CombMapError as e:
            logger.warning(f"Growth-rate measurement failed: {str(e)}")
            return {"warnings": [f"growth: {type(e).__name__}: {str(e)}"]}

    def _locate_deviation_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Locate the imaginary-axis deviation point."""
        logger.info("[NODE: locate_deviation] Locating deviation point...")

        if self._check_upstream_error(state, "locate_deviation"):
            return {}

        try:
            return {"deviation": self.analysis.deviation(state["solve_result"], state.get("rational"))}
        except CombMapError as e:
            logger.warning(f"Deviation point failed: {str(e)}")
            return {"warnings": [f"deviation: {type(e).__name__}: {str(e)}"]}

    def _compare_results_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Compare conformal L against oracle E."""
        logger.info("[NODE: compare_results] Comparing against oracle...")

        if self._check_upstream_error(state, "compare_results"):
            return {}

        report = self.oracle.compare(
            state["solve_result"], state["remez"], state.get("rational"), state["run_config"].threshold
        )
        return {"comparison": report}

    def _write_traces_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Write the CSV traces."""
        logger.info("[NODE: write_traces] Writing CSV traces...")

        if self._check_upstream_error(state, "write_traces"):
            return {}

        try:
            files = self.assembler.write_traces(
                state["solve_result"], state.get("alternation"), state["run_config"].out_dir
            )
            return {"trace_files": files}
        except (OSError, CombMapError) as e:
            logger.error(f"Failed to write traces: {str(e)}")
            return {"error": f"IoError: {str(e)}", "error_kind": "io"}

    def _save_outputs_node(self, state: PipelineState) -> Dict[str, Any]:
        """Node: Save the JSON result files.

        Runs after numerical failures too, so that results.json carries the
        level history of a failed solve.
        """
        logger.info("[NODE: save_outputs] Saving output files...")

        if state.get("error_kind") in ("config", "io") or state.get("run_config") is None:
            self._check_upstream_error(state, "save_outputs")
            return {}

        config = state["run_config"]
        output_files = dict(state.get("trace_files") or {})
        try:
            if state.get("remez") is not None:
                path = config.out_dir / "oracle.json"
                save_json(self.assembler.assemble_oracle_payload(config, state["remez"]), path)
                output_files["oracle"] = path
                logger.info(f"Saved oracle: {path}")

            solved = state.get("solve_result") is not None
            if state["command"] != "oracle" and not state.get("result_path") and (solved or state.get("error")):
                payload = self.assembler.assemble_result_payload(
                    config,
                    state.get("solve_result"),
                    alternation=state.get("alternation"),
                    rational=state.get("rational"),
                    deviation=state.get("deviation"),
                    growth=state.get("growth"),
                    history=state.get("level_history") or [],
                    warnings=state.get("warnings") or [],
                    error=state.get("error"),
                )
                path = config.out_dir / "results.json"
                save_json(payload, path)
                output_files["results"] = path
                logger.info(f"Saved results: {path}")

            if state.get("comparison") is not None:
                path = config.out_dir / "comparison.json"
                payload = self.assembler.assemble_comparison_payload(
                    config, state["comparison"], state["remez"], state["solve_result"]
                )
                save_json(payload, path)
                output_files["comparison"] = path
                logger.info(f"Saved comparison: {path}")
        except (OSError, ValueError) as e:
            logger.error(f"Failed to save outputs: {str(e)}")
            return {"error": f"IoError: {str(e)}", "error_kind": "io"}

        return {"output_files": output_files}
