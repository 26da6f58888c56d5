"""Command-line interface for thermoforce."""

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click
from dotenv import load_dotenv

from thermoforce import __version__
from thermoforce.config import ThermoforceSettings
from thermoforce.langevin import SimulationConfig
from thermoforce.output import emit
from thermoforce.quadrature import QuadratureSpec
from thermoforce.run_config import RunConfig, config_digest, load_run_config
from thermoforce.scans import (
    ScanResult,
    run_antenna_scan,
    run_figure1,
    run_geometry,
    run_lifshitz_scan,
    run_oracle_check,
)

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_ORACLE_FAILED = 3


def setup_logging(log_level: str) -> None:
    """Configure logging for the application; stdout is left for result tables."""
    logging.basicConfig(
        level=getattr(logging, log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


class ThermoforceGroup(click.Group):
    """Click group whose commands return exit codes; usage errors exit with 1."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs["standalone_mode"] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def _common_options(func: Callable) -> Callable:
    func = click.option("--seed", type=int, default=None, help="Seed overriding the config")(func)
    func = click.option(
        "--format",
        "fmt",
        type=click.Choice(["csv", "json"]),
        default=None,
        help="Output format (default: from config, else csv)",
    )(func)
    func = click.option(
        "--output", "-o", type=click.Path(path_type=Path), help="Output file (default: stdout)"
    )(func)
    func = click.option(
        "--config",
        "-c",
        "config_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="Run configuration (JSON or YAML)",
    )(func)
    return func


def _run(
    command: str,
    config_path: Path,
    output: Optional[Path],
    fmt: Optional[str],
    seed: Optional[int],
    scan: Callable[[Any, QuadratureSpec, int, Optional[int]], ScanResult],
) -> int:
    """Load, validate, scan, write; returns the process exit code."""
    try:
        settings = ThermoforceSettings()
        setup_logging(settings.log_level)

        cfg: RunConfig = load_run_config(config_path)
        if cfg.command != command:
            raise click.UsageError(
                f"{config_path} describes '{cfg.command}', not '{command}'"
            )
        resolved_seed = seed if seed is not None else cfg.seed
        if resolved_seed is None:
            resolved_seed = settings.default_seed

        spec = cfg.quadrature.apply(settings.quadrature_spec())
        logger.info(f"Running {command} from {config_path} (workers={settings.workers})")
        result = scan(cfg, spec, settings.workers, resolved_seed)

        target = output if output is not None else cfg.output.path
        text = emit(result, fmt or cfg.output.format, config_digest(cfg), target)
        if target is None:
            click.echo(text, nl=False)

        if result.passed is False:
            click.echo("❌ Oracle check failed", err=True)
            return EXIT_ORACLE_FAILED
        if not result.converged:
            click.echo("⚠️  Some rows did not converge", err=True)
            return EXIT_NOT_CONVERGED
        return EXIT_OK

    except click.UsageError:
        raise
    except Exception as e:
        logger.error(f"{command} failed: {e}", exc_info=True)
        click.echo(f"❌ Error: {e}", err=True)
        return EXIT_USAGE


@click.group(cls=ThermoforceGroup)
@click.version_option(version=__version__)
def main() -> None:
    """
    thermoforce - thermal fluctuation forces between antennas and plates.

    Every command reads one run configuration and writes a CSV or JSON
    table. Exit codes: 0 success, 1 usage or configuration error, 2 some
    rows did not converge, 3 oracle check failed.
    """
    pass


@main.command("antenna-scan")
@_common_options
def antenna_scan(
    config_path: Path, output: Optional[Path], fmt: Optional[str], seed: Optional[int]
) -> int:
    """Interaction free energy, entropy and force coefficient of two noisy antennas."""

    def scan(cfg: Any, spec: QuadratureSpec, workers: int, resolved: Optional[int]) -> ScanResult:
        result = run_antenna_scan(cfg, spec, workers)
        result.seed = resolved
        return result

    return _run("antenna-scan", config_path, output, fmt, seed, scan)


@main.command("figure1")
@_common_options
def figure1(
    config_path: Path, output: Optional[Path], fmt: Optional[str], seed: Optional[int]
) -> int:
    """RLC interaction curve versus reduced temperature t = k_B T / (hbar omega_C)."""

    def scan(cfg: Any, spec: QuadratureSpec, workers: int, resolved: Optional[int]) -> ScanResult:
        result = run_figure1(cfg, spec, workers)
        result.seed = resolved
        return result

    return _run("figure1", config_path, output, fmt, seed, scan)


@main.command("lifshitz-scan")
@_common_options
def lifshitz_scan(
    config_path: Path, output: Optional[Path], fmt: Optional[str], seed: Optional[int]
) -> int:
    """Thermal Casimir free energy and pressure between parallel plates."""

    def scan(cfg: Any, spec: QuadratureSpec, workers: int, resolved: Optional[int]) -> ScanResult:
        result = run_lifshitz_scan(cfg, workers)
        result.seed = resolved
        return result

    return _run("lifshitz-scan", config_path, output, fmt, seed, scan)


@main.command("oracle-check")
@_common_options
def oracle_check(
    config_path: Path, output: Optional[Path], fmt: Optional[str], seed: Optional[int]
) -> int:
    """Compare simulated and equipartition current correlators, and quadrature H with its oracle."""

    def scan(cfg: Any, spec: QuadratureSpec, workers: int, resolved: Optional[int]) -> ScanResult:
        if resolved is None:
            resolved = SimulationConfig().seed
            logger.warning(f"No seed given; using the default seed {resolved}")
        return run_oracle_check(cfg, resolved, spec, workers)

    return _run("oracle-check", config_path, output, fmt, seed, scan)


@main.command("geometry")
@_common_options
def geometry(
    config_path: Path, output: Optional[Path], fmt: Optional[str], seed: Optional[int]
) -> int:
    """Inductances, coupling and its gradient (optionally the force) over separations."""

    def scan(cfg: Any, spec: QuadratureSpec, workers: int, resolved: Optional[int]) -> ScanResult:
        result = run_geometry(cfg, spec, workers)
        result.seed = resolved
        return result

    return _run("geometry", config_path, output, fmt, seed, scan)


if __name__ == "__main__":
    main()
