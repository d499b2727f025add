"""Output writers for kahler-circles."""

from pathlib import Path
from typing import Union

from kahler_circles.formats.base import ReportWriter
from kahler_circles.formats.csv_handler import CSVWriter
from kahler_circles.formats.json_handler import JSONWriter

__all__ = [
    "ReportWriter",
    "JSONWriter",
    "CSVWriter",
]

# Map file extensions to writers
HANDLER_MAP: dict[str, type[ReportWriter]] = {
    ".json": JSONWriter,
    ".csv": CSVWriter,
}

SUPPORTED_EXTENSIONS = tuple(HANDLER_MAP.keys())

SUPPORTED_FORMATS = tuple(ext.lstrip(".") for ext in SUPPORTED_EXTENSIONS)


def get_handler(target: Union[str, Path]) -> type[ReportWriter]:
    """Writer for a --format value ("json", ".csv") or an output path.

    A path selects by its suffix; a path without one gets the JSON writer.
    """
    ext = (target.suffix or ".json") if isinstance(target, Path) else target
    ext = ext.lower()
    if not ext.startswith("."):
        ext = f".{ext}"
    if ext not in HANDLER_MAP:
        raise ValueError(
            f"Unsupported output format: {ext}. "
            f"Supported formats: {', '.join(SUPPORTED_EXTENSIONS)}"
        )
    return HANDLER_MAP[ext]
