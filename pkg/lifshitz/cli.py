from __future__ import annotations

import contextlib
import logging
from pathlib import Path
from typing import Iterator, Optional

import numpy as np
import pandas as pd
import typer
from rich.console import Console
from rich.logging import RichHandler

from .analysis import separation_sweep, thickness_scan
from .config import RunConfig, load_run_config
from .constants import EV_TO_RAD_PER_S
from .dielectric import METALLIC, default_library, load_material_library
from .energy import SolverConfig
from .errors import ConfigError, LifshitzError, MaterialLibraryError, OutputError
from .report import CurveReport, ScanReport, write_csv, write_json

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NOT_CONVERGED = 4

app = typer.Typer(help="Casimir-Lifshitz energies, pressures and levitation distances")
console = Console()


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log solver progress"),
) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@contextlib.contextmanager
def _exit_codes() -> Iterator[None]:
    try:
        yield
    except (ConfigError, MaterialLibraryError) as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(code=EXIT_CONFIG) from exc
    except (OutputError, OSError) as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(code=EXIT_IO) from exc
    except LifshitzError as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(code=EXIT_CONFIG) from exc


def _solver(config: RunConfig, no_retardation: bool) -> SolverConfig:
    return config.solver.updated(retarded=False) if no_retardation else config.solver


def _output_path(config: RunConfig, out: Optional[Path], default_name: str) -> Path:
    if out is not None:
        return out
    if config.output.path is not None:
        return config.resolve(config.output.path)
    return Path(default_name)


def _report_path(config: RunConfig, report: Optional[Path]) -> Optional[Path]:
    if report is not None:
        return report
    if config.output.report is not None:
        return config.resolve(config.output.report)
    return None


def _suffix(config: RunConfig, no_retardation: bool) -> str:
    return f"{config.name}-nonretarded" if no_retardation else config.name


@app.command()
def energy(
    config_path: Path = typer.Argument(..., help="Run configuration (TOML)"),
    materials: Optional[Path] = typer.Option(None, help="Material library overriding the config"),
    no_retardation: bool = typer.Option(False, "--no-retardation", help="Non-retarded limit"),
    out: Optional[Path] = typer.Option(None, help="CSV output path"),
    threads: Optional[int] = typer.Option(None, min=1, help="Worker threads for the sweep"),
    strict: bool = typer.Option(False, help="Exit with status 4 on non-converged points"),
    report: Optional[Path] = typer.Option(None, help="JSON summary output path"),
) -> None:
    """Free energy and pressure over the configured separation grid."""

    with _exit_codes():
        config = load_run_config(config_path)
        if config.grid is None:
            raise ConfigError(f"{config_path}: field 'grid': required by the energy command")
        library = config.library(materials)
        stack = config.build_stack(library)
        solver = _solver(config, no_retardation)
        curve = separation_sweep(
            stack, config.grid.separations(), solver, threads=threads or config.threads
        )
        summary = CurveReport(name=_suffix(config, no_retardation), curve=curve)
        destination = _output_path(config, out, f"{summary.name}.csv")
        write_csv(summary.to_frame(), destination)
        json_path = _report_path(config, report)
        if json_path is not None:
            write_json(summary.to_json(), json_path)
    summary.to_rich_console(console)
    console.print(f"Wrote [green]{destination}[/green]")
    if strict and not summary.ok:
        raise typer.Exit(code=EXIT_NOT_CONVERGED)


@app.command()
def levitation(
    config_path: Path = typer.Argument(..., help="Run configuration (TOML)"),
    materials: Optional[Path] = typer.Option(None, help="Material library overriding the config"),
    no_retardation: bool = typer.Option(False, "--no-retardation", help="Non-retarded limit"),
    out: Optional[Path] = typer.Option(None, help="CSV output path"),
    threads: Optional[int] = typer.Option(None, min=1, help="Worker threads for the scan"),
    strict: bool = typer.Option(False, help="Exit with status 4 on non-converged rows"),
    report: Optional[Path] = typer.Option(None, help="JSON summary output path"),
) -> None:
    """Levitation distance and repulsion maximum for every configured film thickness."""

    with _exit_codes():
        config = load_run_config(config_path)
        scan = config.levitation
        if scan is None:
            raise ConfigError(f"{config_path}: field 'levitation': required by the levitation command")
        library = config.library(materials)
        stack = config.build_stack(library, separation=scan.bracket[0])
        solver = _solver(config, no_retardation)
        rows = thickness_scan(
            stack,
            scan.thicknesses,
            scan.bracket,
            solver,
            side=scan.side,
            scan_points=scan.scan_points,
            threads=threads or config.threads,
        )
        summary = ScanReport(
            name=_suffix(config, no_retardation),
            stack=stack.describe(),
            rows=rows,
            config=solver.model_dump(),
        )
        destination = _output_path(config, out, f"{summary.name}-levitation.csv")
        write_csv(summary.to_frame(), destination)
        json_path = _report_path(config, report)
        if json_path is not None:
            write_json(summary.to_json(), json_path)
    summary.to_rich_console(console)
    console.print(f"Wrote [green]{destination}[/green]")
    if strict and not summary.ok:
        raise typer.Exit(code=EXIT_NOT_CONVERGED)


def _parse_grid(grid: str) -> np.ndarray:
    parts = [part.strip() for part in grid.split(",")]
    if len(parts) not in (3, 4):
        raise typer.BadParameter("expected min,max,n[,log|linear]", param_hint="--grid")
    spacing = parts[3].lower() if len(parts) == 4 else "linear"
    try:
        lower, upper, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise typer.BadParameter(str(exc), param_hint="--grid") from exc
    if count < 1 or lower < 0 or upper < lower or (count > 1 and upper == lower):
        raise typer.BadParameter("need 0 <= min < max and n >= 1", param_hint="--grid")
    if spacing == "log":
        if lower <= 0:
            raise typer.BadParameter("a log grid needs min > 0", param_hint="--grid")
        return np.geomspace(lower, upper, count)
    if spacing != "linear":
        raise typer.BadParameter(f"unknown spacing {spacing!r}", param_hint="--grid")
    return np.linspace(lower, upper, count)


@app.command()
def dielectric(
    material: str = typer.Argument(..., help="Material name"),
    grid: str = typer.Option("0.01,100,60,log", help="min,max,n[,log|linear] in eV"),
    materials: Optional[Path] = typer.Option(None, help="Material library (default: shipped)"),
    out: Optional[Path] = typer.Option(None, help="CSV output path (default: stdout)"),
) -> None:
    """ε(iξ) of one material; ξ = 0 rows carry the static value."""

    xi_ev = _parse_grid(grid)
    with _exit_codes():
        library = load_material_library(materials) if materials else default_library()
        entry = library[material]
        xi = xi_ev * EV_TO_RAD_PER_S
        eps = np.empty_like(xi)
        positive = xi > 0
        eps[positive] = entry.epsilon(xi[positive])
        static = entry.static
        eps[~positive] = np.inf if static is METALLIC else static
        frame = pd.DataFrame({"xi_rad_per_s": xi, "xi_eV": xi_ev, "epsilon": eps})
        if out is None:
            typer.echo(frame.to_csv(index=False, float_format="%.17g", lineterminator="\n"), nl=False)
            return
        write_csv(frame, out)
    console.print(f"Wrote [green]{out}[/green]")


if __name__ == "__main__":
    app()
