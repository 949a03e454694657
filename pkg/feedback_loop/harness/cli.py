import functools
from pathlib import Path
from typing import Any, Callable, Dict, Optional, TypeVar, cast

import click

from feedback_loop.baselines.registry import AGENT_KINDS
from feedback_loop.core.exceptions import ConfigurationError
from feedback_loop.core.utils.str_utils import process_and_verify_string
from feedback_loop.harness.ablation import ABLATIONS, run_ablation
from feedback_loop.harness.bench import run_complexity_bench
from feedback_loop.harness.compare import compare_agents
from feedback_loop.harness.config import PRESETS, ExperimentConfig, build_config
from feedback_loop.harness.runner import run_experiment
from feedback_loop.tools.logging import set_log_level, setup_logger
from feedback_loop.tools.pretty_print import print_frame

logger = setup_logger()

F = TypeVar("F", bound=Callable[..., Any])


def experiment_options(func: F) -> F:
    """Options shared by every subcommand that runs an experiment."""
    options = [
        click.option(
            "-p",
            "--preset",
            type=click.Choice(PRESETS),
            help="Scenario preset applied on top of the defaults.",
        ),
        click.option(
            "-c",
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            help="""Dotted-key config file, one `key = value` per line (e.g. `optimizer.alpha0 = 0.01`).
            Applied after the preset.""",
        ),
        click.option("-s", "--seed", type=int, help="Base seed; replica r runs with seed + r."),
        click.option("-t", "--steps", type=int, help="Horizon T of every replica."),
        click.option("-d", "--delay", type=int, help="Feedback delay in steps."),
        click.option("-r", "--replicas", type=int, help="Number of seeded replicas."),
        click.option("-j", "--n-jobs", type=int, help="Parallel workers over replicas, -1 for all cores."),
        click.option(
            "-o",
            "--out",
            type=click.Path(file_okay=False, path_type=Path),
            help="Directory the result CSVs are written to.",
        ),
        click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_experiment(options: Dict[str, Any], extra: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Build the experiment config from the shared options; CLI flags win over the files."""
    set_log_level(options["verbose"])
    out = options["out"]
    overrides: Dict[str, Any] = {
        "seed": options["seed"],
        "steps": options["steps"],
        "delay": options["delay"],
        "replicas": options["replicas"],
        "n_jobs": options["n_jobs"],
        "output": str(out) if out is not None else None,
        **(extra or {}),
    }
    return build_config(preset=options["preset"], config_path=options["config_path"], overrides=overrides)


def handle_errors(func: F) -> F:
    """Turn configuration and output errors into a click error that names the bad key or path."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except ConfigurationError as e:
            raise click.ClickException(f"Invalid configuration: {e}") from e
        except OSError as e:
            raise click.ClickException(f"Cannot write results to `{e.filename or ''}`: {e.strerror or e}") from e

    return cast(F, wrapper)


@click.group()
def main() -> None:
    """Simulate continuous-feedback personalization agents against synthetic users."""


@main.command()
@experiment_options
@click.option(
    "-a",
    "--agent",
    type=click.Choice(AGENT_KINDS),
    help="Agent to run. Defaults to the adaptive engine.",
)
@handle_errors
def run(agent: Optional[str], **kwargs: Any) -> None:
    """Run one agent and write steps.csv, summary.csv and extended_summary.csv."""
    config = load_experiment(kwargs, {"agent.kind": agent})
    result = run_experiment(config)
    print_frame(result.summary, title="Summary")


@main.command()
@experiment_options
@click.option(
    "-a",
    "--agents",
    default="dp,sol,pu,sp,cas",
    show_default=True,
    help=f"Comma-separated agents to compare, from {AGENT_KINDS}.",
)
@click.option("--with-oracle", is_flag=True, help="Also run the oracle agent as a zero-regret reference.")
@click.option("--save-steps", is_flag=True, help="Also write steps_<agent>.csv for every agent.")
@handle_errors
def compare(agents: str, with_oracle: bool, save_steps: bool, **kwargs: Any) -> None:
    """Run several agents on seed-matched replicas and sign-test the adaptive engine against each."""
    try:
        kinds = process_and_verify_string(agents, AGENT_KINDS)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--agents") from e
    config = load_experiment(kwargs)
    result = compare_agents(config, kinds, with_oracle=with_oracle, save_steps=save_steps)
    print_frame(result.summary, title="Summary")
    print_frame(result.sign_tests, title=f"Sign tests of `{result.reference}`")


@main.command()
@experiment_options
@click.option(
    "-x",
    "--ablation",
    required=True,
    type=click.Choice(sorted(ABLATIONS)),
    help="Single configuration change to compare against the base run.",
)
@handle_errors
def ablate(ablation: str, **kwargs: Any) -> None:
    """Run the base configuration and one ablated variant, and write ablation.csv."""
    config = load_experiment(kwargs)
    result = run_ablation(config, ablation)
    print_frame(result.table, title=f"Ablation `{ablation}`")


@main.command()
@click.option(
    "-o",
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory complexity.csv is written to. Defaults to the results directory.",
)
@click.option("-n", "--num-updates", default=200, show_default=True, help="Timed updates per grid point.")
@click.option("-s", "--seed", default=0, show_default=True)
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@handle_errors
def bench(out: Optional[Path], num_updates: int, seed: int, verbose: bool) -> None:
    """Time engine updates over the |A| x d grid and regress them on |A| * d."""
    set_log_level(verbose)
    result = run_complexity_bench(out or ExperimentConfig().output_dir, num_updates=num_updates, seed=seed)
    print_frame(result.table, title=f"Update time vs |A|*d (R^2 = {result.r2:.3f})")


if __name__ == "__main__":
    main()
