from __future__ import annotations
from dataclasses import dataclass, field
import importlib
import inspect
import logging
import pathlib
import sys
from typing import Any, ClassVar, Self, Sequence
from .config import BaseConfig, load_config, dump_config
from .event import Event, EventBus
from .report import Report

logger = logging.getLogger(__name__)

PROJECT_ROOT = pathlib.Path(__file__).absolute().parent.parent


@dataclass
class PluginReloadEvent(Event):
    plugin_class: type[BasePlugin]


@dataclass
class PluginConfigUpdateEvent(Event):
    plugin_class: type[BasePlugin]


@dataclass
class RunOptions:
    p: int | None = None
    all_transversals: bool = False
    all_witnesses: bool = False
    max_census: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)


class BasePlugin:
    deps: ClassVar[Sequence[type[BasePlugin]]] = []
    config_dir: ClassVar[pathlib.Path | None] = None
    _config: ClassVar[BaseConfig | None] = None
    instance: ClassVar[Self | None] = None

    def __init_subclass__(cls):
        cls._config = None
        cls.instance = None

    @classmethod
    def load(cls):
        if cls.instance is not None:
            return cls.reload()
        cls.instance = cls()
        cls.instance.init()
        for dc in cls.deps:
            cls.instance.on_dep_load(cls.instance.dep(dc))
        logger.debug("%s loaded", cls.__module__)

    @classmethod
    def reload(cls):
        if cls.instance is None:
            return cls.load()
        old_instance = cls.instance
        cls.instance = cls()
        cls.instance.handle_reload(old_instance)
        cls.trigger_event(PluginReloadEvent(cls))
        for dc in cls.deps:
            cls.instance.on_dep_load(cls.instance.dep(dc))
        logger.debug("%s reloaded", cls.__module__)

    @classmethod
    def unload(cls):
        if cls.instance is None:
            return
        cls.instance.clear()
        cls.instance = None
        logger.debug("%s unloaded", cls.__module__)

    @classmethod
    def root_dir(cls):
        return pathlib.Path(inspect.getmodule(cls).__file__).parent

    @classmethod
    def identifier(cls):
        return "/".join(cls.__module__.split(".")[1:-1])

    @classmethod
    def config_file(cls):
        if BasePlugin.config_dir is not None:
            return BasePlugin.config_dir / f"{cls.identifier().replace('/', '.')}.yaml"
        return cls.root_dir() / "config.yaml"

    @classmethod
    def config_type(cls) -> type[BaseConfig]:
        for c in cls.mro():
            if issubclass(c, BasePlugin):
                if c is BasePlugin:
                    break
                if hasattr(sys.modules[c.__module__], "Config"):
                    return getattr(sys.modules[c.__module__], "Config")
        return BaseConfig

    @classmethod
    def load_config(cls):
        cls._config = load_config(cls.config_type(), cls.config_file())

    @classmethod
    def get_config(cls) -> BaseConfig:
        if cls._config is None:
            cls.load_config()
        return cls._config

    @classmethod
    def update_config(cls, config: BaseConfig):
        if config == cls._config:
            return
        dump_config(config, cls.config_file())
        cls._config = config
        cls.trigger_event(PluginConfigUpdateEvent(cls))

    def dep[T: BasePlugin](self, dep: type[T]) -> T:
        assert dep in self.deps
        d = PluginManager.get_loaded_plugins(dep)
        assert len(d) > 0
        return d[0]

    def init(self):
        pass

    def handle_reload(self, old: Self):
        self.init()

    def clear(self):
        pass

    def on_dep_load(self, dep: BasePlugin):
        pass

    def commands(self) -> list[type[Command]]:
        return []

    def on_event(self, e: Event):
        pass

    @staticmethod
    def trigger_event(e: Event):
        EventBus.trigger_event(e)


class Command:
    """A CLI subcommand contributed by a plugin.

    The docstring of `invoke` is the help text, the command name is the class
    name in kebab case unless `name` is set.
    """

    name: ClassVar[str | None] = None
    needs_input: ClassVar[bool] = True
    # extra boolean flags, name -> help; values land in RunOptions.extra
    flags: ClassVar[dict[str, str]] = {}

    def __init__(self, plugin: BasePlugin):
        self.plugin = plugin

    @classmethod
    def command_name(cls) -> str:
        if cls.name:
            return cls.name
        return "".join(
            f"-{c.lower()}" if c.isupper() and i else c.lower()
            for i, c in enumerate(cls.__name__)
        )

    @classmethod
    def description(cls) -> str:
        return inspect.getdoc(cls.invoke) or ""

    def invoke(self, subject: Any, options: RunOptions) -> Report:
        raise NotImplementedError


class PluginManager:
    plugin_classes: ClassVar[list[type[BasePlugin]]] = []

    @classmethod
    def init(cls, plugins_root: pathlib.Path | None = None):
        cls.load_all_plugin_classes(plugins_root)
        EventBus.remove_callback("plugin-manager")
        EventBus.register_callback("plugin-manager", cls.on_event)

        for plugin_class in cls.plugin_classes:
            if plugin_class.get_config().enabled and cls.check_deps(plugin_class):
                try:
                    plugin_class.load()
                except Exception:
                    logger.exception("failed to load %s", plugin_class.__module__)
                    plugin_class.unload()

    @classmethod
    def load_all_plugin_classes(cls, plugins_root: pathlib.Path | None = None):
        plugins_root = plugins_root or PROJECT_ROOT / "plugins"
        plugin_classes: list[type[BasePlugin]] = []
        for import_file in sorted(plugins_root.rglob("plugin.py")):
            module_name = ".".join(
                import_file.absolute()
                .relative_to(PROJECT_ROOT)
                .with_suffix("")
                .parts
            )
            module = importlib.import_module(module_name)
            plugin_classes.append(getattr(module, "Plugin"))

        ordered: list[type[BasePlugin]] = []
        pending = plugin_classes
        while pending:
            waiting = [
                pc
                for pc in pending
                if not all(
                    any(issubclass(o, dep) for o in ordered) for dep in pc.deps
                )
            ]
            ordered.extend(pc for pc in pending if pc not in waiting)
            if len(waiting) == len(pending):
                ordered.extend(waiting)
                break
            pending = waiting
        cls.plugin_classes = ordered

    @classmethod
    def loaded_plugins(cls) -> list[BasePlugin]:
        return [pc.instance for pc in cls.plugin_classes if pc.instance is not None]

    @classmethod
    def get_loaded_plugins[T: BasePlugin](cls, type: type[T]) -> list[T]:
        return [p for p in cls.loaded_plugins() if isinstance(p, type)]

    @classmethod
    def check_deps(cls, target: type[BasePlugin]):
        return all(len(cls.get_loaded_plugins(dep)) > 0 for dep in target.deps)

    @classmethod
    def commands(cls) -> dict[str, Command]:
        result: dict[str, Command] = {}
        for p in cls.loaded_plugins():
            for command_class in p.commands():
                name = command_class.command_name()
                assert name not in result, f"duplicate command {name}"
                result[name] = command_class(p)
        return result

    @classmethod
    def try_load_single_plugin(cls, plugin_class: type[BasePlugin]):
        if cls.check_deps(plugin_class):
            plugin_class.load()
            for pc in cls.plugin_classes[cls.plugin_classes.index(plugin_class) :]:
                if pc.get_config().enabled and pc.instance is None:
                    cls.try_load_single_plugin(pc)

    @classmethod
    def unload_single_plugin(cls, plugin_class: type[BasePlugin]):
        plugin_class.unload()
        for pc in cls.plugin_classes[cls.plugin_classes.index(plugin_class) :]:
            if pc.instance is not None and not cls.check_deps(pc):
                cls.unload_single_plugin(pc)

    @classmethod
    def on_event(cls, e: Event):
        match e:
            case PluginConfigUpdateEvent(plugin_class=pc):
                if pc.get_config().enabled:
                    cls.try_load_single_plugin(pc)
                else:
                    cls.unload_single_plugin(pc)
            case _:
                for p in cls.loaded_plugins():
                    p.on_event(e)
