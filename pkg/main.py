import sys

sys.pycache_prefix = "__pycache__"

from pathlib import Path
import json
import logging
import click
from framework.config import check_config, config_schema
from framework.errors import AlgebraError, InputError
from framework.event import CheckEvent, Event, EventBus, ViolationEvent
from framework.plugin import Command, PluginManager, RunOptions
from framework.report import SCHEMA
from framework.worker import ThreadedWorker
from plugins.harness.plugin import Plugin as HarnessPlugin

logger = logging.getLogger(__name__)


def _log_event(e: Event):
    match e:
        case CheckEvent(subject=s, check=c, passed=passed):
            logger.debug("%s %s: %s", s, c, "ok" if passed else "failed")
        case ViolationEvent(subject=s, violation=v):
            logger.debug("%s violation %s", s, v)


def _setup_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    EventBus.remove_callback("cli-log")
    if verbose:
        EventBus.register_callback("cli-log", _log_event)


def _emit_error(command: str, e: AlgebraError, fmt: str):
    if fmt == "json":
        click.echo(json.dumps({"schema": SCHEMA, "command": command} | e.to_dict(), sort_keys=True, indent=2))
    else:
        click.echo(f"error: {e.name}: {e}", err=True)


def _make_command(name: str, command: Command) -> click.Command:
    harness = HarnessPlugin.instance
    config = harness.get_config()

    def run(fixture, file, fmt, p, all_transversals, max_census, all_witnesses, verbose, **extra):
        _setup_logging(verbose)
        fmt = fmt or config.output_format
        options = RunOptions(
            p=p,
            all_transversals=all_transversals or config.all_transversals,
            all_witnesses=all_witnesses,
            max_census=max_census,
            extra=extra,
        )
        try:
            subject = harness.load_subject(fixture, file, p) if command.needs_input else None
            report = command.invoke(subject, options)
        except AlgebraError as e:
            _emit_error(name, e, fmt)
            sys.exit(e.exit_code)
        report.publish()
        click.echo(report.to_json(name) if fmt == "json" else report.to_text())
        sys.exit(0 if report.ok else 1)

    params = [
        click.Option(["--fixture"], help="built-in fixture name"),
        click.Option(["--file"], type=click.Path(dir_okay=False, path_type=Path), help="scenario file"),
        click.Option(["--format", "fmt"], type=click.Choice(["text", "json"]), default=None),
        click.Option(["--p"], type=click.IntRange(min=2), default=None, help="override the prime"),
        click.Option(["--all-transversals"], is_flag=True),
        click.Option(["--max-census"], type=click.IntRange(min=1), default=None),
        click.Option(["--all-witnesses"], is_flag=True, help="report every witness, not just the first"),
        click.Option(["--verbose", "-v"], is_flag=True),
    ]
    params += [click.Option([f"--{flag}"], is_flag=True, help=text) for flag, text in command.flags.items()]
    return click.Command(name, callback=run, params=params, help=command.description())


def _config_epilog() -> str:
    lines = ["\b", "Harness settings (plugins/harness/config.yaml):"]
    for info in config_schema(HarnessPlugin.config_type()):
        extra = f" {list(info.extra)}" if info.extra else ""
        lines.append(f"  {info.name} = {info.default!r}  {info.comment}{extra}".rstrip())
    return "\n".join(lines)


def build_cli() -> click.Group:
    PluginManager.init()
    if HarnessPlugin.instance is None:
        raise RuntimeError("harness plugin failed to load")
    check_config(HarnessPlugin.get_config())
    group = click.Group(
        "partial-actions",
        help="Partial groupoid actions on split rings.",
        epilog=_config_epilog(),
        context_settings={"max_content_width": 120},
    )
    for name, command in sorted(PluginManager.commands().items()):
        group.add_command(_make_command(name, command))
    return group


def main():
    try:
        cli = build_cli()
    except (ValueError, InputError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    ThreadedWorker.start(HarnessPlugin.get_config().census_workers)
    try:
        cli()
    finally:
        ThreadedWorker.stop()


if __name__ == "__main__":
    main()
