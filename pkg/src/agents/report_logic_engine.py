"""Report Logic Engine - Executes report blocks."""

from typing import Any

from src.report_blocks import REPORT_BLOCK_REGISTRY
from src.schemas import ReportBlock
from src.utils import setup_logging

logger = setup_logging(__name__)


class ReportLogicEngine:
    """Agent responsible for executing report blocks.

    Input: Block name, result object, parameters
    Output: ReportBlock
    Responsibility: Invoke the registered block and surface its failures
    """

    def __init__(self):
        """Initialize the Report Logic Engine."""
        self.registry = REPORT_BLOCK_REGISTRY
        logger.info(f"ReportLogicEngine initialized with {len(self.registry)} blocks")

    def execute_block(self, block_name: str, subject: Any, **kwargs) -> ReportBlock:
        """Execute a report block.

        Args:
            block_name: Name of the block to execute
            subject: Result object the block reads
            **kwargs: Additional parameters for the block

        Returns:
            ReportBlock with the section content

        Raises:
            ValueError: If block name is not found
        """
        logger.debug(f"Executing report block: {block_name}")

        if block_name not in self.registry:
            raise ValueError(f"Unknown report block: {block_name}")

        block_func = self.registry[block_name]

        try:
            return block_func(subject, **kwargs)
        except Exception as e:
            logger.error(f"Failed to execute block {block_name}: {str(e)}")
            raise

    def list_available_blocks(self) -> list[str]:
        """Get list of available report blocks.

        Returns:
            List of block names
        """
        return list(self.registry.keys())
