"""
fjcone - Fritz John certificates for cone-constrained vector optimization.

Entry point for the application. Delegates all business logic to the controller.
"""
import logging
import sys
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler

from controller.command_controller import CommandController
from domain.outputs.json_handler import JSONReportHandler
from domain.outputs.text_handler import TextReportHandler
from view.output_format import OutputFormat
from view.ui import ConsoleView

handlers = {
    OutputFormat.JSON: JSONReportHandler,
    OutputFormat.TEXT: TextReportHandler,
}


def configure_logging(verbose: bool):
    """Rich log records on standard error; DEBUG with --verbose, WARNING otherwise."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=verbose, markup=False)],
        force=True,
    )


def main(argv=None, ui=None) -> int:
    ui = ui or ConsoleView()
    controller = CommandController(
        ui,
        handlers=handlers,
        path_factory=Path,
        configure_logging=configure_logging,
    )
    return controller.run(argv)


if __name__ == "__main__":
    sys.exit(main())
