"""
Configuration manager for experiment config files.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

from riff.cli.models.config import ExperimentConfig
from riff.cli.utils.errors import ConfigurationError, FileSystemError
from riff.cli.utils.fs import read_text, write_text_artifact
from riff.src.utils import file_manager


class ConfigManager:
    """
    Loads, overrides and validates an ExperimentConfig.

    Storage:
        - Experiment settings: a JSON file passed with ``--config``
        - Output root default: ``RIFF_RUNS_DIR`` (environment or ``.env``)
    """

    def __init__(self):
        """Initialize the configuration manager."""
        self._config: Optional[ExperimentConfig] = None
        self._path: Optional[Path] = None

    def load(self, path: Optional[Path] = None) -> ExperimentConfig:
        """
        Load configuration from a JSON file, or start from defaults.

        Args:
            path: Config file; None gives the default configuration

        Returns:
            The loaded (not yet validated) configuration

        Raises:
            ConfigurationError: Unreadable file, invalid JSON or unknown keys
        """
        if path is None:
            self._config = ExperimentConfig()
            return self._config

        self._path = Path(path).expanduser()
        try:
            data = json.loads(read_text(self._path))
        except (json.JSONDecodeError, FileSystemError) as e:
            raise ConfigurationError(f"Failed to load configuration {self._path}: {e}")
        if not isinstance(data, dict):
            raise ConfigurationError(f"Configuration {self._path} must be a JSON object")
        try:
            self._config = ExperimentConfig.from_dict(data)
        except TypeError as e:
            raise ConfigurationError(f"Invalid configuration {self._path}: {e}")
        return self._config

    def resolve(self, path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """Load, apply CLI overrides and validate."""
        config = self.load(path)
        config.apply_overrides(overrides or {})
        config.validate()
        return config

    def save(self, path: Path, config: Optional[ExperimentConfig] = None):
        """
        Write a configuration as canonical JSON.

        Raises:
            ConfigurationError: If the file cannot be written
        """
        config = config or self._config or ExperimentConfig()
        try:
            write_text_artifact(Path(path), file_manager.dumps_json(config.to_dict()))
        except FileSystemError as e:
            raise ConfigurationError(f"Failed to save configuration: {e}")

    @property
    def config_file_path(self) -> Optional[Path]:
        return self._path
