import sys
from typing import Optional, TextIO

from rich.console import Console
from rich.markup import escape

from view.interface import UIInterface


class ConsoleView(UIInterface):
    """Reports go to standard output untouched; messages go to standard error through rich."""

    def __init__(self, stdout: Optional[TextIO] = None, console: Optional[Console] = None, colors: Optional[dict] = None):
        self.stdout = stdout or sys.stdout
        self.console = console or Console(stderr=True)
        default_colors = {
            "error": "#ff6b81",      # Rosy red for error messages
            "confirm": "#6fc67c",    # Light green for confirmations
            "subtle": "#9aa0a6",     # Soft grey for secondary details
        }
        self.colors = {**default_colors, **(colors or {})}

    def emit(self, text: str):
        self.stdout.write(text)
        self.stdout.flush()

    def show_error(self, message: str):
        self.console.print(f"[{self.colors['error']}]error:[/] {escape(message)}", markup=True, highlight=False)

    def show_saved(self, destination: str, size: int):
        self.console.print(
            f"[{self.colors['confirm']}]✓[/] report written to {escape(destination)} [{self.colors['subtle']}]({size} bytes)[/]",
            markup=True,
            highlight=False,
        )
