from enum import Enum
from pathlib import PurePath


class OutputFormat(Enum):
    JSON = "json"
    TEXT = "text"

    @property
    def extension(self) -> str:
        return {
            OutputFormat.JSON: ".json",
            OutputFormat.TEXT: ".txt",
        }[self]

    def destination(self, name: str) -> str:
        """``name`` with this format's extension appended when it has no suffix."""
        return name if PurePath(name).suffix else f"{name}{self.extension}"

    @classmethod
    def choices(cls) -> list:
        return [member.value for member in cls]
