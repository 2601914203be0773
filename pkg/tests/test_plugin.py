import pytest
from framework.config import BaseConfig
from framework.event import CheckEvent
from framework.plugin import BasePlugin, PluginConfigUpdateEvent, PluginManager, PluginReloadEvent


class Recorder(BasePlugin):
    def init(self):
        self.seen = []

    def on_event(self, e):
        self.seen.append(e)


@pytest.fixture
def recorder(monkeypatch):
    monkeypatch.setattr(PluginManager, "plugin_classes", [Recorder])
    Recorder.load()
    yield Recorder.instance
    Recorder.unload()


def test_events_reach_loaded_plugins(recorder):
    check = CheckEvent("FX-DAT", "associativity", True)
    reload = PluginReloadEvent(Recorder)
    PluginManager.on_event(check)
    PluginManager.on_event(reload)
    assert recorder.seen == [check, reload]


def test_reload_keeps_receiving(recorder):
    Recorder.reload()
    assert Recorder.instance is not recorder
    e = PluginReloadEvent(Recorder)
    PluginManager.on_event(e)
    assert Recorder.instance.seen[-1] is e


def test_disabling_unloads(recorder, monkeypatch):
    monkeypatch.setattr(Recorder, "_config", BaseConfig(enabled=False))
    PluginManager.on_event(PluginConfigUpdateEvent(Recorder))
    assert Recorder.instance is None
    assert PluginManager.loaded_plugins() == []
