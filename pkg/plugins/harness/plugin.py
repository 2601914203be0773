from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated
import logging
from framework.config import BaseConfig
from framework.errors import InputError
from framework.plugin import BasePlugin, Command, PluginManager, RunOptions
from framework.report import Report
from .census import action_census, datum_census
from .claims import run_claims
from .registry import FixtureRegistry, verify_scenario
from .scenario import Scenario, parse_scenario

logger = logging.getLogger(__name__)


@dataclass
class Config(BaseConfig):
    default_p: Annotated[int, "prime used when a scenario does not name one", 2, 997] = 3
    output_format: Annotated[str, "report format", "text", "json"] = "text"
    max_census: Annotated[int, "candidates examined before census stops", 1, 10**7] = 1_000_000
    census_workers: Annotated[int, "threads used by census", 1, 64] = 4
    all_transversals: bool = False


class Verify(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Run the verifier of every stanza in the scenario"""
        return verify_scenario(subject, options.all_witnesses)


class Census(Command):
    flags = {"actions": "enumerate candidate partial actions instead of datums"}

    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Enumerate every datum (or with --actions every candidate action) over the scenario's groupoid and ring"""
        config: Config = self.plugin.get_config()
        cap = options.max_census or config.max_census
        G = subject.require_groupoid()
        ring = subject.require_ring()
        if options.extra.get("actions"):
            if options.all_transversals or config.all_transversals:
                taus = list(G.all_transversals())
            else:
                taus = [G.canonical_transversal()]
            return action_census(G, ring, taus, cap)
        tau = subject.datum.transversal if subject.datum is not None else G.canonical_transversal()
        return datum_census(G, ring, tau, cap)


class AllFixtures(Command):
    needs_input = False

    def invoke(self, subject: Scenario | None, options: RunOptions) -> Report:
        """Check the documented properties of every built-in fixture"""
        return run_claims(self.plugin.registry)


class RunChecks(Command):
    def invoke(self, subject: Scenario, options: RunOptions) -> Report:
        """Run the commands listed on the scenario's `check` lines"""
        if not subject.checks:
            raise InputError(f"{subject.name} lists no checks")
        commands = PluginManager.commands()
        report = Report(f"{subject.name} checks", options.all_witnesses)
        for name in subject.checks:
            if name not in commands or name == self.command_name():
                raise InputError(f"unknown check {name}", known=sorted(commands))
            logger.debug("running %s on %s", name, subject.name)
            report.merge(commands[name].invoke(subject, options), name)
        return report


class Plugin(BasePlugin):
    def init(self):
        self.registry = FixtureRegistry()

    def load_subject(
        self, fixture: str | None = None, file: Path | None = None, p: int | None = None
    ) -> Scenario:
        if (fixture is None) == (file is None):
            raise InputError("give exactly one of --fixture or --file")
        if fixture is not None:
            return self.registry.load(fixture, p)
        config: Config = self.get_config()
        try:
            text = file.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise InputError(f"cannot read {file}: {e}", path=str(file)) from e
        return parse_scenario(text, p, config.default_p)

    def commands(self):
        return [Verify, Census, AllFixtures, RunChecks]
