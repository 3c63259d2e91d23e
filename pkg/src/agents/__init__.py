"""Agent modules for the comb-map approximation pipeline."""

from src.agents.config_parser_agent import ConfigParserAgent
from src.agents.solver_agent import SolverAgent
from src.agents.oracle_agent import OracleAgent
from src.agents.analysis_agent import AnalysisAgent
from src.agents.report_assembly_agent import ReportAssemblyAgent
from src.agents.report_logic_engine import ReportLogicEngine
from src.agents.template_engine import TemplateEngine
from src.agents.langgraph_orchestrator import LangGraphOrchestrator

__all__ = [
    "ConfigParserAgent",
    "SolverAgent",
    "OracleAgent",
    "AnalysisAgent",
    "ReportAssemblyAgent",
    "ReportLogicEngine",
    "TemplateEngine",
    "LangGraphOrchestrator"
]
