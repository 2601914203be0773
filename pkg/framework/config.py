from __future__ import annotations
from dataclasses import dataclass, fields, is_dataclass
from pathlib import Path
from typing import Annotated, Any, NamedTuple, get_args, get_origin, get_type_hints
import yaml


yaml.add_multi_representer(
    Path,
    lambda d, v: d.represent_scalar("!path", str(v.absolute())),
)
yaml.add_constructor(
    "!path",
    lambda l, n: Path(l.construct_scalar(n)),
)


@dataclass
class BaseConfig:
    enabled: bool = True


class FieldInfo(NamedTuple):
    name: str
    type: Any
    comment: str
    extra: tuple
    default: Any


def config_schema(config_type: type[BaseConfig]) -> list[FieldInfo]:
    """Describe every field of a config dataclass.

    `Annotated[T, "comment", *extra]` fields carry a comment and optional
    extra arguments (a value range for ints, the choices for strings).
    """
    assert is_dataclass(config_type)
    hints = get_type_hints(config_type, include_extras=True)
    infos: list[FieldInfo] = []
    for f in fields(config_type):
        t, comment, extra = hints[f.name], "", ()
        if get_origin(t) is Annotated:
            t, comment, *extra = get_args(t)
        infos.append(FieldInfo(f.name, t, comment, tuple(extra), f.default))
    return infos


def load_config[C: BaseConfig](config_type: type[C], config_file: Path) -> C:
    if not config_file.exists():
        return config_type()
    config_dict = yaml.load(config_file.read_text("utf-8"), yaml.Loader) or {}
    known = {f.name for f in fields(config_type)}
    return config_type(**{k: v for k, v in config_dict.items() if k in known})


def dump_config(config: BaseConfig, config_file: Path):
    config_file.parent.mkdir(parents=True, exist_ok=True)
    config_file.write_text(yaml.dump(config.__dict__, sort_keys=False), "utf-8")


def check_config(config: BaseConfig):
    for info in config_schema(type(config)):
        value = getattr(config, info.name)
        if info.type is int and len(info.extra) == 2:
            low, high = info.extra
            if not low <= value <= high:
                raise ValueError(f"{info.name}={value} outside [{low}, {high}]")
        elif info.type is str and info.extra:
            if value not in info.extra:
                raise ValueError(f"{info.name}={value!r} not one of {info.extra}")
