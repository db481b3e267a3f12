import sys
from itertools import count, islice
from typing import Optional

import click
import colorama
from termcolor import colored

from zoprox.bench.compare import compare_traces
from zoprox.bench.config import load_config, resolve_data_path
from zoprox.bench.runner import run_experiment
from zoprox.objects.errors import ConfigException, LibsvmParseException, ZOProxException
from zoprox.utils import add_line_count, parse_int_list, strip_newlines
from zoprox.utils.formatter import format_table
from zoprox.utils.logs import setup_logging

EXIT_CONFIG = 2
EXIT_ABORT = 3


def error(*lines: str):
    print(colored("\n".join(lines), "red"), file=sys.stderr)


def show_parse_error(e: LibsvmParseException, path: Optional[str]):
    """The offending line with 5 lines of context either side and a caret under the token."""
    print(f"Failed to parse dataset: {e.reason}", file=sys.stderr)
    line = e.line
    print(f"Line {colored(str(line), 'green')}, Token: {colored(e.token, 'green')}", file=sys.stderr)
    if path is None:
        return
    with open(path, encoding="utf-8", errors="replace") as f:
        lines = list(strip_newlines(islice(f, max(line - 6, 0), line + 5)))
    first = max(line - 5, 1)
    above = lines[:line - first]
    error_line = lines[line - first] if len(lines) > line - first else ""
    below = lines[line - first + 1:]

    line_counter = count(first)
    if above:
        print(colorama.Style.DIM + "\n".join(add_line_count(above, line_counter)), file=sys.stderr)
    arrow = " " * (e.column or 0)
    print(colorama.Style.BRIGHT + f"{next(line_counter):>3}| {error_line}\n     {arrow}^", file=sys.stderr)
    if below:
        print(colorama.Style.DIM + "\n".join(add_line_count(below, line_counter)), file=sys.stderr)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log solver progress at debug level.")
def cli(verbose):
    """Zeroth-order proximal solvers and their benchmark harness."""
    setup_logging(verbose)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON experiment config.")
@click.option("--algo", help="Algorithm id, e.g. zor_svrg or adaptc+zor_svrg.")
@click.option("--budget", help="Function query budget per seed, e.g. 2e5.")
@click.option("--seeds", help="Comma separated seeds.")
@click.option("--out", help="Directory for the CSV traces.")
def run(config_path, algo, budget, seeds, out):
    """Run an experiment and write one trace per seed."""
    try:
        config = load_config(config_path, algorithm=algo,
                             fqc_budget=None if budget is None else int(float(budget)),
                             seeds=None if seeds is None else parse_int_list(seeds),
                             output_dir=out)
    except ValueError as e:
        error(f"Invalid option: {e}")
        exit(EXIT_CONFIG)
    except ConfigException as e:
        error(str(e))
        exit(EXIT_CONFIG)

    try:
        result = run_experiment(config)
    except LibsvmParseException as e:
        dataset = config.problem.dataset
        show_parse_error(e, None if dataset is None else resolve_data_path(dataset))
        exit(EXIT_CONFIG)
    except ZOProxException as e:
        error(str(e))
        exit(EXIT_CONFIG)

    rows = []
    for seed, path in sorted(result.files.items()):
        last = result.traces[seed].last
        rows.append((seed, last.fqc if last else 0, last.objective if last else None, path))
    print(format_table(("seed", "fqc", "objective", "file"), rows))
    if not result.ok:
        for r in result.aborted:
            error(f"seed {r.seed} aborted: {r.error}")
        exit(EXIT_ABORT)


@cli.command()
@click.option("--a", "dir_a", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--b", "dir_b", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--budgets", required=True, help="Comma separated query budgets, e.g. 1e3,1e4,1e5.")
def compare(dir_a, dir_b, budgets):
    """Compare two trace directories on a grid of query budgets."""
    try:
        summary = compare_traces(dir_a, dir_b, parse_int_list(budgets))
    except ValueError as e:
        error(f"Invalid budgets: {e}")
        exit(EXIT_CONFIG)
    except ZOProxException as e:
        error(str(e))
        exit(EXIT_CONFIG)
    print(summary.table())


if __name__ == '__main__':
    cli()
