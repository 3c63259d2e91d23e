"""Utility functions for the comb-map approximation pipeline."""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

# Global flag to ensure logging is configured only once
_logging_configured = False


def configure_logging() -> None:
    """Configure logging for the entire application.

    Should be called once at application startup.
    """
    global _logging_configured

    if _logging_configured:
        return

    from src.config import LOG_LEVEL, LOG_FORMAT

    logging.basicConfig(
        level=LOG_LEVEL,
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler()]
    )

    _logging_configured = True


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance for a module.

    Args:
        name: Module name

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


def setup_logging(name: str) -> logging.Logger:
    """Module logger; configures the root handler on first use."""
    configure_logging()
    return get_logger(name)


def save_json(data: Dict[str, Any], filepath: Path) -> None:
    """Save data as formatted JSON file.

    Floats are written with their shortest round-trip representation,
    so a reloaded file reproduces every value bit for bit.

    Args:
        data: Dictionary to save
        filepath: Path to output file
    """
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")


def load_json(filepath: Path) -> Dict[str, Any]:
    """Load JSON file.

    Args:
        filepath: Path to JSON file

    Returns:
        Loaded dictionary
    """
    with open(filepath, 'r', encoding='utf-8') as f:
        return json.load(f)


def format_real(value: float, digits: int | None = None) -> str:
    """Format a real number with a fixed count of significant digits."""
    if digits is None:
        from src.config import CSV_DIGITS
        digits = CSV_DIGITS
    return f"{float(value):.{digits}g}"


def write_csv(filepath: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """Write a comma-separated trace file with a header row.

    Integers are written as-is, every other value through format_real.

    Args:
        filepath: Path to output file
        header: Column names
        rows: Row tuples, one value per column

    Returns:
        Number of data rows written
    """
    filepath.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(filepath, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([
                str(item) if isinstance(item, int) else format_real(item)
                for item in row
            ])
            count += 1
    return count
