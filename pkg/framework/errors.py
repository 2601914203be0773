from __future__ import annotations
from typing import Any, ClassVar


class AlgebraError(Exception):
    exit_code: ClassVar[int] = 1

    def __init__(self, message: str = "", **witness: Any):
        super().__init__(message or self.__class__.__name__)
        self.witness = witness

    @property
    def name(self):
        return self.__class__.__name__

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": self.name,
            "message": str(self),
            "witness": {k: _plain(v) for k, v in self.witness.items()},
        }


class InputError(AlgebraError):
    """Malformed or inconsistent input."""

    exit_code = 2


class MathError(AlgebraError):
    """A mathematical check failed or a required hypothesis is missing."""

    exit_code = 1


def _plain(v: Any):
    match v:
        case str() | int() | bool() | None:
            return v
        case frozenset() | set():
            return sorted(map(_plain, v), key=str)
        case tuple() | list():
            return [_plain(i) for i in v]
        case dict():
            return {str(k): _plain(i) for k, i in v.items()}
        case _:
            return str(v)


class InternalInconsistency(MathError):
    """Two computations that must agree did not."""
