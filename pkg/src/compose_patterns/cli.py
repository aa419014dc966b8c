"""``compose-patterns`` command line."""

from __future__ import annotations

import json
from typing import Sequence

import click

from . import __version__
from .catalog import explain as explain_pattern
from .classifier import classify_image, load_rules
from .errors import ComposePatternsError, RootNotFound, UnknownPattern
from .itemsets import as_fraction
from .patterns import PatternId
from .report import render_report
from .scanner import STRICTNESS_CHOICES, ScanOptions, scan_path
from .stats import cliffs_delta, mann_whitney_u, read_sample, summarize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ROOT_NOT_FOUND = 2
EXIT_PATTERN_FOUND = 3


class PatternFired(Exception):
    def __init__(self, patterns: list[str]):
        self.patterns = patterns
        super().__init__(", ".join(patterns))


def _support(ctx: click.Context, param: click.Parameter, value: str) -> str:
    try:
        threshold = as_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{value!r} is not a number") from None
    if not 0 < threshold <= 1:
        raise click.BadParameter("must be in (0, 1]")
    return value


def _env_pairs(values: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in values:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise click.BadParameter(f"expected KEY=VALUE, got {item!r}", param_hint="--env")
        out[key] = val
    return out


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="compose-patterns")
def cli() -> None:
    """Static analysis of Docker Compose orchestrations."""


@cli.command()
@click.argument("root")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--rules", "rules", multiple=True, type=click.Path(exists=True, dir_okay=False), help="Extra rule table (repeatable).")
@click.option("--min-support", default="0.05", callback=_support, show_default=True)
@click.option("--strictness", type=click.Choice(STRICTNESS_CHOICES), default="co", show_default=True)
@click.option("--loose", is_flag=True, help="Also scan any YAML file with a top-level services mapping.")
@click.option("--merge", "merges", multiple=True, metavar="BASE,OVR,...", help="Explicit -f chain relative to ROOT (repeatable).")
@click.option("--include-unclassified", is_flag=True, help="Keep Unclassified in itemset transactions.")
@click.option("--fail-on-pattern", "fail_on", multiple=True, metavar="ID", help="Exit with status 3 if this pattern is found.")
@click.option("--env", "env", multiple=True, metavar="KEY=VALUE", help="Variable used for ${...} interpolation.")
@click.option("--no-follow-extends", is_flag=True, help="Only resolve extends files that match the filename filter.")
def scan(root, fmt, rules, min_support, strictness, loose, merges, include_unclassified, fail_on, env, no_follow_extends):
    """Analyse every compose file under ROOT."""
    try:
        fail_ids = [PatternId.parse(p) for p in fail_on]
    except UnknownPattern as exc:
        raise click.BadParameter(str(exc), param_hint="--fail-on-pattern") from None
    chains = [[p.strip() for p in m.split(",") if p.strip()] for m in merges]
    if any(len(c) < 2 for c in chains):
        raise click.BadParameter("a merge chain needs at least two files", param_hint="--merge")
    opts = ScanOptions(
        root=root,
        rules_paths=list(rules),
        min_support=as_fraction(min_support),
        strictness=strictness,
        format=fmt,
        env_overrides=_env_pairs(env),
        loose=loose,
        merge_chains=chains,
        include_unclassified=include_unclassified,
        follow_extends_outside_filter=not no_follow_extends,
    )
    report = scan_path(opts)
    click.echo(render_report(report, fmt), nl=False)
    fired = [p.code for p in fail_ids if report.pattern_counts.get(p, 0) > 0]
    if fired:
        raise PatternFired(fired)


@cli.command()
@click.argument("root")
@click.option("--min-support", default="0.05", callback=_support, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
@click.option("--include-unclassified", is_flag=True)
def mine(root, min_support, fmt, include_unclassified):
    """Frequent service-type itemsets of the compose files under ROOT."""
    report = scan_path(ScanOptions(root=root, min_support=as_fraction(min_support), include_unclassified=include_unclassified))
    if fmt == "json":
        payload = {"transactions": report.transaction_count, "itemsets": [i.to_dict() for i in report.itemsets]}
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo(f"transactions: {report.transaction_count}")
    for item in report.itemsets:
        names = ", ".join(t.display_name.lower() for t in item.sorted_items)
        click.echo(f"{item.support_text}  ({names})")


@cli.command()
@click.argument("image_ref")
@click.option("--rules", "rules", multiple=True, type=click.Path(exists=True, dir_okay=False))
def classify(image_ref, rules):
    """Service type of an image reference."""
    found, rule = classify_image(image_ref, load_rules(rules))
    if rule is None:
        click.echo(f"{found.value}\tno matching rule")
    else:
        click.echo(f"{found.value}\t{rule.match_kind}:{rule.pattern}\tpriority {rule.priority}\t{rule.origin}")


@cli.command(short_help="Compare two numeric samples.")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--alternative", type=click.Choice(["two-sided", "greater", "less"]), default="two-sided", show_default=True)
def stats(file_a, file_b, alternative):
    """Compare two newline-delimited samples (Mann-Whitney U, Cliff's delta)."""
    try:
        a, b = read_sample(file_a), read_sample(file_b)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    test = mann_whitney_u(a, b, alternative)
    effect = cliffs_delta(a, b)
    click.echo(f"U = {test.u_statistic:g}")
    click.echo(f"p = {test.p_value:.6g} ({test.alternative}, {test.method})")
    click.echo(f"Cliff's delta = {effect.delta:.6f} ({effect.magnitude})")
    for label, sample in (("a", a), ("b", b)):
        s = summarize(sample)
        click.echo(f"{label}: n={s.n} min={s.min:g} q1={s.q1:g} median={s.median:g} q3={s.q3:g} max={s.max:g}")


@cli.command()
@click.argument("pattern_id")
def explain(pattern_id):
    """Describe a pattern, given its id such as HTTP_REVERSE_PROXY."""
    click.echo(explain_pattern(pattern_id), nl=False)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit status instead of raising ``SystemExit``."""
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="compose-patterns", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except RootNotFound as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_ROOT_NOT_FOUND
    except PatternFired as exc:
        click.echo(f"pattern(s) found: {exc}", err=True)
        return EXIT_PATTERN_FOUND
    except (ComposePatternsError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return EXIT_OK
