import hashlib
import json
import os
from typing import Any, Optional, Dict


# ------------------------------------------------------------
# ---------------------- File Manager ---------------------
# ------------------------------------------------------------

class FileManager:
    """Handles artifact I/O. JSON is written canonically so reruns are byte-identical."""

    @staticmethod
    def ensure_directory(path: str) -> None:
        """Create directory if it doesn't exist."""
        os.makedirs(path, exist_ok=True)

    @staticmethod
    def dumps_json(data: Any) -> str:
        """Canonical JSON text (sorted keys, 2-space indent, trailing newline)."""
        return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"

    @staticmethod
    def save_json(data: Any, filepath: str) -> None:
        """Save data as canonical JSON to file."""
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(FileManager.dumps_json(data))

    @staticmethod
    def load_json(filepath: str) -> Optional[Dict[str, Any]]:
        """Load JSON from file, return None if file doesn't exist."""
        if not os.path.exists(filepath):
            return None

        with open(filepath, 'r', encoding='utf-8') as f:
            return json.load(f)

    @staticmethod
    def digest(data: Any) -> str:
        """SHA-256 of the canonical JSON form of ``data``."""
        return hashlib.sha256(FileManager.dumps_json(data).encode('utf-8')).hexdigest()

file_manager = FileManager()
