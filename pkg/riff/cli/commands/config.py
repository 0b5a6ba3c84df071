"""
Configuration commands for the RIFF CLI.
"""

import sys
from pathlib import Path

import click

from riff.cli.config_manager import ConfigManager
from riff.cli.models.config import ExperimentConfig
from riff.cli.utils.errors import ConfigurationError, FileSystemError, RiffError, handle_error
from riff.src.utils import file_manager


@click.group(name="config")
def config_group():
    """Manage experiment configuration files."""
    pass


@config_group.command(name="show")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Experiment config file")
@click.option("--json", "output_json", is_flag=True, help="Output in JSON format")
def config_show(config_path: str, output_json: bool):
    """
    Display a resolved configuration (defaults filled in).

    Examples:

    \b
    $ riff config show --config taiwan.json
    """
    try:
        manager = ConfigManager()
        config = manager.load(Path(config_path))

        if output_json:
            click.echo(file_manager.dumps_json(config.to_dict()), nl=False)
            return

        click.echo()
        click.secho("RIFF Configuration", fg="blue", bold=True)
        click.echo("━" * 40)

        click.echo()
        click.secho("Dataset", fg="cyan", bold=True)
        click.echo(f"  Path:               {config.dataset.path or 'Not set'}")
        click.echo(f"  Label column:       {config.dataset.label_column}")
        click.echo(f"  Order column:       {config.dataset.order_column or '-'}")
        click.echo(f"  Categorical policy: {config.dataset.categorical_policy}")

        click.echo()
        click.secho("Split", fg="cyan", bold=True)
        split = config.split
        click.echo(f"  Mode:               {split.mode} (seed {split.seed})")
        click.echo(
            f"  Fractions:          {split.train_fraction:g} / {split.validation_fraction:g} / {split.test_fraction:g}"
        )

        click.echo()
        click.secho("Protocol", fg="cyan", bold=True)
        click.echo(f"  Sample ratio:       {config.sample_ratio:g} ({config.sample_ratio_mode})")
        click.echo(f"  Positive rate:      {config.target_positive_rate:g}")
        click.echo(f"  Budget:             {config.budget_metric} <= {config.budget_max:g}")
        click.echo(f"  Models:             {', '.join(config.models)}")
        click.echo(f"  Grid:               {', '.join(str(g) for g in config.grid)}")
        click.echo(f"  Seeds:              {', '.join(str(s) for s in config.seeds)}")
        click.echo(f"  Min leaf / tau:     {config.min_leaf} / {config.tau:g}")

        click.echo()
        click.echo(f"Configuration file: {manager.config_file_path}")
        click.echo()

    except RiffError as e:
        click.secho(f"\n✗ Configuration error: {e.message}", fg="red", err=True)
        sys.exit(e.exit_code)
    except Exception as e:
        sys.exit(handle_error(e))


@config_group.command(name="validate")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Experiment config file")
@click.option("--check-data", is_flag=True, help="Also check that the dataset file exists")
def config_validate(config_path: str, check_data: bool):
    """
    Validate an experiment configuration.

    Examples:

    \b
    $ riff config validate --config taiwan.json --check-data
    """
    try:
        config = ConfigManager().resolve(Path(config_path))
        click.secho("✓ Configuration is valid", fg="green")
        click.echo(f"  Run id: {config.run_id()}")
        if check_data:
            if not Path(config.dataset.path).expanduser().is_file():
                raise FileSystemError(f"Dataset not found: {config.dataset.path}")
            click.secho("✓ Dataset file exists", fg="green")

    except RiffError as e:
        click.secho(f"✗ {e.message}", fg="red", err=True)
        sys.exit(e.exit_code)
    except Exception as e:
        sys.exit(handle_error(e))


@config_group.command(name="init")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--data", type=str, default="", help="Dataset path to put in the template")
@click.option("--force", is_flag=True, help="Overwrite an existing file")
def config_init(path: str, data: str, force: bool):
    """
    Write a configuration template with the default protocol settings.

    Examples:

    \b
    $ riff config init experiment.json --data credit.csv
    """
    try:
        target = Path(path).expanduser()
        if target.exists() and not force:
            raise ConfigurationError(f"{target} already exists (use --force to overwrite)")
        config = ExperimentConfig()
        config.dataset.path = data
        ConfigManager().save(target, config)
        click.secho(f"✓ Template written to {target}", fg="green")

    except RiffError as e:
        click.secho(f"✗ {e.message}", fg="red", err=True)
        sys.exit(e.exit_code)
    except Exception as e:
        sys.exit(handle_error(e))
