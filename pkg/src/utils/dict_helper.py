from typing import Any, Dict, Iterable
from src.api.undefined import UNDEFINED


def drop_undefined(data: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively drops fields with value UNDEFINED"""
    if not isinstance(data, dict):
        return data
    return {
        key: drop_undefined(value)
        for key, value in data.items()
        if value is not UNDEFINED
    }


def drop_except_keys(data: Dict[str, Any], keys_to_keep: Iterable[str]) -> Dict[str, Any]:
    """Drops all top-level fields except those specified in keys_to_keep.

    Key order follows `data`.
    """
    keep = set(keys_to_keep)
    if not isinstance(data, dict):
        return data
    return {key: value for key, value in data.items() if key in keep}


def overlay(*layers: Dict[str, Any]) -> Dict[str, Any]:
    """Merges layers left to right; UNDEFINED values never override.

    Example:
    ```py
    overlay({"seed": 1, "jmax": 20}, {"jmax": 12}, {"seed": UNDEFINED})
    {'seed': 1, 'jmax': 12}
    ```
    """
    merged: Dict[str, Any] = {}
    for layer in layers:
        merged.update(drop_undefined(layer))
    return merged
