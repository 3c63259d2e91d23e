"""Config Parser Agent - Converts key = value run files into a validated RunConfig."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import ValidationError

from src.errors import ConfigParseError
from src.geometry import validate
from src.schemas import ProblemSpec, RunConfig
from src.utils import setup_logging

logger = setup_logging(__name__)

FLOAT_KEYS = {"a", "tol_b0", "threshold"}
INT_KEYS = {"k0", "m", "grid"}
FLOAT_LIST_KEYS = {"inner_poles", "outer_poles"}
INT_LIST_KEYS = {"k", "schedule"}
BOOL_KEYS = {"extrapolate"}
PROBLEM_KEYS = ("a", "inner_poles", "outer_poles", "k0", "k", "m")


class ConfigParserAgent:
    """Agent responsible for parsing and validating run configurations.

    Input: Path to a key = value config file, command-line overrides
    Output: Validated RunConfig instance
    Responsibility: Parsing, type conversion and problem validation
    """

    def __init__(self):
        """Initialize the Config Parser Agent."""
        logger.info("ConfigParserAgent initialized")

    def _parse_list_field(self, key: str, value: str) -> List[Union[int, float]]:
        """Parse a bracketed, comma-separated list.

        Args:
            key: Config key (decides int or float items)
            value: Text such as "[0.1, 0.2]" or "[]"

        Returns:
            List of numbers
        """
        text = value.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ConfigParseError(f"{key}: expected a bracketed list, got {value!r}")
        cast = int if key in INT_LIST_KEYS else float
        return [cast(item.strip()) for item in text[1:-1].split(",") if item.strip()]

    def _parse_value(self, key: str, value: str) -> Any:
        if key in FLOAT_LIST_KEYS or key in INT_LIST_KEYS:
            return self._parse_list_field(key, value)
        if key in FLOAT_KEYS:
            return float(value)
        if key in INT_KEYS:
            return int(value)
        if key in BOOL_KEYS:
            lowered = value.strip().lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ConfigParseError(f"{key}: expected a boolean, got {value!r}")
            return lowered in ("true", "1", "yes")
        raise ConfigParseError(f"Unknown config key: {key}")

    def parse_text(self, text: str) -> Dict[str, Any]:
        """Parse config text into a dictionary of typed values.

        Blank lines and everything after '#' are ignored.

        Args:
            text: Config file contents

        Returns:
            Dictionary keyed by config key

        Raises:
            ConfigParseError: On malformed lines, unknown keys or bad numbers
        """
        values: Dict[str, Any] = {}
        for number, raw_line in enumerate(text.splitlines(), start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigParseError(f"line {number}: expected 'key = value', got {raw_line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                values[key] = self._parse_value(key, value)
            except ValueError as e:
                if isinstance(e, ConfigParseError):
                    raise ConfigParseError(f"line {number}: {e}") from e
                raise ConfigParseError(f"line {number}: bad value for {key}: {value!r}") from e
        return values

    def parse(self, config_path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """Read a config file, apply overrides and validate the problem.

        Args:
            config_path: Path to the config file
            overrides: Values taken from the command line; None entries are ignored

        Returns:
            Validated RunConfig instance

        Raises:
            ConfigParseError: If the file is unreadable or malformed
            ProblemSpecError: If the problem violates its standing assumptions
        """
        path = Path(config_path)
        logger.info(f"Parsing run config: {path}")

        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigParseError(f"cannot read config {path}: {e}") from e

        values = self.parse_text(text)
        values.update({key: value for key, value in (overrides or {}).items() if value is not None})
        if "a" not in values:
            raise ConfigParseError(f"{path}: missing required key 'a'")

        try:
            problem = ProblemSpec(**{key: values[key] for key in PROBLEM_KEYS if key in values})
            run_fields = {
                "schedule": values.get("schedule"),
                "tol_B0": values.get("tol_b0"),
                "grid": values.get("grid"),
                "out_dir": values.get("out_dir"),
                "threshold": values.get("threshold"),
                "extrapolate": values.get("extrapolate"),
            }
            config = RunConfig(problem=problem, **{k: v for k, v in run_fields.items() if v is not None})
        except ValidationError as e:
            logger.error(f"Pydantic validation failed: {e}")
            raise ConfigParseError(f"Invalid run config - validation errors: {e}") from e

        validate(problem)
        logger.info(f"Parsed problem a={problem.a}, poles={list(problem.poles)}, N={problem.basis_size}")
        return config
