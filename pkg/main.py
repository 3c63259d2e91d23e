"""Main entry point for the comb-map sgn approximation toolkit.

Runs one of four commands through the LangGraph pipeline:

    solve    conformal-map solve, writes results.json
    oracle   Remez ground truth, writes oracle.json
    compare  oracle + solve, writes comparison.json, exit 3 on FAIL
    trace    solve + CSV traces for plotting
"""

import argparse
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

sys.path.insert(0, str(Path(__file__).parent))

from src.agents.langgraph_orchestrator import COMMANDS, LangGraphOrchestrator
from src.utils import configure_logging, get_logger

# Configure logging once at startup
configure_logging()
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_FAIL = 3

EXIT_CODES = {"config": EXIT_USAGE, "numerical": EXIT_NUMERICAL, "io": EXIT_NUMERICAL}


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with the usage exit code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_levels(text: str) -> List[int]:
    """Parse a level list such as "8,16,32" or "[8, 16, 32]"."""
    items = text.strip().strip("[]").split(",")
    try:
        return [int(item) for item in items if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level list: {text!r}")


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments.

    Returns:
        Parsed arguments
    """
    parser = CliArgumentParser(description="Best uniform sgn approximation by comb-domain conformal maps")
    parser.add_argument("command", choices=COMMANDS, help="What to run")
    parser.add_argument("--config", required=True, help="Path to the key = value problem config")
    parser.add_argument("--levels", type=parse_levels, help="Level schedule, e.g. 8,16,32,64,128")
    parser.add_argument("--tol-b0", type=float, dest="tol_b0", help="Cauchy tolerance on B0")
    parser.add_argument("--grid", type=int, help="Grid size for alternation scan and Remez")
    parser.add_argument("--out", type=Path, help="Output directory")
    parser.add_argument("--threshold", type=float, help="Relative-difference threshold for compare")
    parser.add_argument("--result", help="Stored results.json to use instead of solving (compare, trace)")
    return parser.parse_args(argv)


def build_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "schedule": args.levels,
        "tol_b0": args.tol_b0,
        "grid": args.grid,
        "out_dir": args.out,
        "threshold": args.threshold,
    }


def print_summary(command: str, state: Dict[str, Any]) -> None:
    """Print the human-readable summary of a finished run."""
    result = state.get("solve_result")
    if result is not None and command != "oracle":
        print(f"L = {1.0 / math.cosh(result.B0_star):.12g}")
        print(f"B0* = {result.B0_star:.12g} (level n = {result.discretization.n})")
        if result.B0_extrapolated is not None:
            print(f"B0 extrapolated = {result.B0_extrapolated:.12g}")
        alternation = state.get("alternation")
        if alternation is not None:
            print(f"alternation count = {alternation.count} (expected {alternation.expected_count})")
        else:
            print("alternation count = unavailable")

    remez = state.get("remez")
    if remez is not None:
        print(f"E = {remez.E:.12g}")
        print("coefficients = (" + ", ".join(f"{c:.12g}" for c in remez.coefficients) + ")")

    comparison = state.get("comparison")
    if comparison is not None:
        verdict = "PASS" if comparison.passed else "FAIL"
        print(f"relative difference = {comparison.relative_difference:.6e} (threshold {comparison.threshold:g})")
        print(verdict)

    for name, path in (state.get("trace_files") or {}).items():
        print(f"{name}: {path}")
    for name, path in (state.get("output_files") or {}).items():
        if name in ("results", "oracle", "comparison"):
            print(f"{name}: {path}")

    for warning in state.get("warnings") or []:
        print(f"warning: {warning}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one CLI command and return its exit status."""
    args = parse_arguments(argv)

    if args.result and args.command not in ("compare", "trace"):
        print(f"error: --result is only used by compare and trace, not {args.command}", file=sys.stderr)
        return EXIT_USAGE

    orchestrator = LangGraphOrchestrator()
    state = orchestrator.run_pipeline(args.command, args.config, build_overrides(args), args.result)

    print_summary(args.command, state)

    if state.get("error"):
        print(f"error: {state['error']}", file=sys.stderr)
        return EXIT_CODES.get(state.get("error_kind"), EXIT_NUMERICAL)

    comparison = state.get("comparison")
    if comparison is not None and not comparison.passed:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
