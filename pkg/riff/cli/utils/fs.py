"""
Output directories and text artifacts for riff commands.

Commands write splits, selections, run directories, manifests and reports
through these helpers so that permission and disk problems surface as
FileSystemError (exit code 2).
"""

import os
import tempfile
from pathlib import Path
from typing import Any, Mapping

from riff.cli.utils.errors import FileSystemError


def _nearest_existing(path: Path) -> Path:
    while not path.exists() and path != path.parent:
        path = path.parent
    return path


def prepare_output_dir(path: Path, purpose: str = "output") -> Path:
    """
    Create the directory a command writes ``purpose`` into and return it resolved.

    Raises:
        FileSystemError: The path is a file, or neither it nor its nearest
            existing parent is writable
    """
    path = Path(path).expanduser().resolve()
    if path.exists() and not path.is_dir():
        raise FileSystemError(f"Cannot write {purpose} to {path}: not a directory")
    if not os.access(_nearest_existing(path), os.W_OK):
        raise FileSystemError(
            f"Cannot write {purpose} to {path}: permission denied\n"
            f"Try: chmod u+w {_nearest_existing(path)}"
        )
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise FileSystemError(f"Cannot create {purpose} directory {path}: {e}")
    return path


def write_text_artifact(path: Path, content: str) -> Path:
    """
    Replace ``path`` with ``content`` through a temporary file in the same directory.

    Raises:
        FileSystemError: The directory cannot be created or the write fails
    """
    path = Path(path).expanduser()
    directory = prepare_output_dir(path.parent)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(content)
        os.replace(temp_name, path)
    except OSError as e:
        Path(temp_name).unlink(missing_ok=True)
        raise FileSystemError(f"Cannot write {path}: {e}")
    return path


def write_manifest(path: Path, entries: Mapping[str, Any]) -> Path:
    """One ``key=value`` line per entry in insertion order; None is written empty."""
    lines = "".join(f"{key}={'' if value is None else value}\n" for key, value in entries.items())
    return write_text_artifact(path, lines)


def read_text(path: Path) -> str:
    """
    Read a UTF-8 text file (configs, reports).

    Raises:
        FileSystemError: Missing, unreadable or not UTF-8
    """
    path = Path(path).expanduser()
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileSystemError(f"File not found: {path}")
    except PermissionError:
        raise FileSystemError(f"Permission denied: Cannot read {path}")
    except (OSError, UnicodeDecodeError) as e:
        raise FileSystemError(f"Cannot read {path}: {e}")
