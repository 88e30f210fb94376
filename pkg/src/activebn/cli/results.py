"""Result contract shared by the command-line subcommands."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any


@dataclass(slots=True, frozen=True)
class CommandResult:
    """Human-readable subcommand output plus optional structured data and written files."""

    text: str
    data: Any | None = None
    paths: tuple[Path, ...] = ()

    @classmethod
    def with_data(cls, text: str, data: Any, *, paths: tuple[Path, ...] = ()) -> CommandResult:
        return cls(text=text, data=data, paths=paths)


__all__ = ["CommandResult"]
