import pytest
from framework.plugin import BasePlugin
from plugins.harness.registry import FixtureRegistry


@pytest.fixture(scope="session")
def registry():
    return FixtureRegistry()


@pytest.fixture
def hex_groupoid(registry):
    return registry.load("FX-HEX").require_groupoid()


@pytest.fixture
def b2(registry):
    return registry.load("FX-B2").require_action()


@pytest.fixture
def dat(registry):
    return registry.load("FX-DAT").require_datum()


@pytest.fixture
def gamma(registry):
    return registry.load("FX-GAMMA").require_action()


@pytest.fixture
def glob(registry):
    return registry.load("FX-GLOB")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    monkeypatch.setattr(BasePlugin, "config_dir", tmp_path / "config")
