from __future__ import annotations
from pathlib import Path
import logging
from framework.errors import InputError, InternalInconsistency
from framework.report import Report
from plugins.datum.datum import verify_datum
from plugins.globalization.globalization import build_globalization, globalize
from plugins.partial_action.action import verify_partial_action
from .scenario import Scenario, parse_scenario

logger = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class UnknownFixture(InputError):
    pass


def verify_scenario(sc: Scenario, all_witnesses: bool = False) -> Report:
    """Run the verifier of every stanza present."""
    report = Report(sc.name, all_witnesses)
    if sc.groupoid is not None:
        report.facts["groupoid"] = f"{len(sc.groupoid.objects)} objects, {len(sc.groupoid.morphisms)} morphisms"
    if sc.action is not None:
        report.merge(verify_partial_action(sc.action, all_witnesses, subject=sc.name), "action")
    if sc.datum is not None:
        report.merge(verify_datum(sc.datum, all_witnesses), "datum")
    if sc.globalization is not None:
        _, glob = globalize(sc.datum, sc.globalization)
        report.merge(glob, "globalization")
    return report


class FixtureRegistry:
    """Named built-in scenarios, each verified when first loaded."""

    def __init__(self, directory: Path = FIXTURE_DIR):
        self.directory = directory
        self._cache: dict[tuple[str, int | None], Scenario] = {}

    def names(self) -> list[str]:
        return sorted(f.stem for f in self.directory.glob("*.scn"))

    def text(self, name: str) -> str:
        path = self.directory / f"{name}.scn"
        if not path.exists():
            raise UnknownFixture(f"no fixture named {name}", known=self.names())
        return path.read_text(encoding="utf-8")

    def load(self, name: str, p: int | None = None) -> Scenario:
        key = (name, p)
        if key not in self._cache:
            sc = parse_scenario(self.text(name), p)
            report = verify_scenario(sc)
            if not report.ok:
                raise InternalInconsistency(
                    f"fixture {name} fails verification: {report.first_violation}",
                    fixture=name,
                )
            if sc.globalization is not None:
                build_globalization(sc.globalization)
            logger.debug("fixture %s loaded", name)
            self._cache[key] = sc
        return self._cache[key]
