from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum, auto
from typing import Optional


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class ActionKind(Enum):
    SUCCESS = auto()
    ERROR = auto()


@dataclass
class ActionResult:
    kind: ActionKind
    message: Optional[str] = None
    exit_code: int = EXIT_OK

    @classmethod
    def success(cls, exit_code: int = EXIT_OK) -> "ActionResult":
        return cls(ActionKind.SUCCESS, exit_code=exit_code)

    @classmethod
    def error(cls, message: str, exit_code: int = EXIT_USAGE) -> "ActionResult":
        return cls(ActionKind.ERROR, message=message, exit_code=exit_code)


class UIInterface(ABC):
    """Abstract interface for the UI/View layer to facilitate testing and
    dependency injection.
    """

    @abstractmethod
    def emit(self, text: str):
        """Write a rendered report to standard output, byte for byte."""
        pass

    @abstractmethod
    def show_error(self, message: str):
        pass

    @abstractmethod
    def show_saved(self, destination: str, size: int):
        """Confirm that a report was written to a file."""
        pass
