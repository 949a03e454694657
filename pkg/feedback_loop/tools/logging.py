import logging
from logging import LogRecord
from pathlib import Path
from typing import Sequence

from rich.logging import RichHandler
from rich.text import Text

__all__: Sequence[str] = ("setup_logger", "set_log_level")


_PACKAGE_NAME: str = "feedback_loop"


class PackagePathRichHandler(RichHandler):
    """RichHandler that prefixes every record with its package-relative source location."""

    def get_relative_path(self, path_name: str) -> str:
        """Get the path of the emitting module relative to the directory holding the package."""
        _path = Path(path_name)

        module_root_dir = next((p for p in reversed(_path.parents) if p.name == _PACKAGE_NAME), None)
        if module_root_dir is None:
            return str(_path)
        return str(_path.relative_to(module_root_dir.parent))

    def render_message(self, record: LogRecord, message: str) -> Text:
        """Render the log message as `[path] [function: line] message`.

        Args:
            record (LogRecord): The log record.
            message (str): The formatted log message.

        Returns:
            The rendered log message as a Rich Text object.
        """
        text = Text()
        text.append(f"[{self.get_relative_path(record.pathname)}]", style="light_cyan1")
        text.append(f" [{record.funcName}: {record.lineno}]", style="thistle1")
        text.append(f" {message}")
        return text


def setup_logger(log_level: int = logging.INFO) -> logging.Logger:
    """Setup a colored root logger. Calling it again returns the already configured logger."""
    logger = logging.getLogger()

    if any(isinstance(handler, (logging.StreamHandler, RichHandler)) for handler in logger.handlers):
        return logger

    handler = PackagePathRichHandler(
        rich_tracebacks=True,
        show_path=False,
        markup=False,
        omit_repeated_times=False,
        tracebacks_show_locals=False,
    )
    logger.addHandler(handler)
    logger.setLevel(log_level)

    return logger


def set_log_level(verbose: bool) -> None:
    """Switch the root logger between INFO and DEBUG."""
    setup_logger().setLevel(logging.DEBUG if verbose else logging.INFO)
