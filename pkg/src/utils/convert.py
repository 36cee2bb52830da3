from dataclasses import fields, is_dataclass
from enum import Enum
from typing import Any, Dict

from src.api.undefined import UNDEFINED


def asdict(obj: Any, *, dict_factory: type = dict) -> Dict[str, Any]:
    """Convert a dataclass instance to a dictionary, excluding UNDEFINED values.

    Like `dataclasses.asdict()`, except that fields holding UNDEFINED are
    omitted and nested dataclasses, lists, tuples and dicts are converted
    recursively with the same rule.

    Args:
    -----
    obj: `Any`
        A dataclass instance.
    dict_factory: `type`
        Mapping type of the result.

    Returns:
    --------
    `Dict[str, Any]`:
        The field mapping without UNDEFINED entries.
    """
    if not is_dataclass(obj) or isinstance(obj, type):
        raise TypeError("asdict() should be called on dataclass instances")
    return _asdict_inner(obj, dict_factory)


def _asdict_inner(obj: Any, dict_factory: type) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        return dict_factory(
            (field.name, _asdict_inner(getattr(obj, field.name), dict_factory))
            for field in fields(obj)
            if getattr(obj, field.name) is not UNDEFINED
        )
    if isinstance(obj, tuple) and hasattr(obj, "_fields"):
        return type(obj)(*[_asdict_inner(v, dict_factory) for v in obj])
    if isinstance(obj, (list, tuple)):
        return type(obj)(_asdict_inner(v, dict_factory) for v in obj)
    if isinstance(obj, dict):
        return dict_factory(
            (k, _asdict_inner(v, dict_factory)) for k, v in obj.items() if v is not UNDEFINED
        )
    return obj


def to_text(value: Any) -> str:
    """Renders a parameter value for `key=value` metadata."""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    return str(value)
