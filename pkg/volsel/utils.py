"""
Helpers for resolving the dotted paths registered in hooks.py
"""

import importlib

from volsel import hooks
from volsel.exceptions import InvalidParameterError


def get_attr(path: str):
    """Import `package.module.attr` and return attr"""
    module_name, _, attr = path.rpartition(".")
    return getattr(importlib.import_module(module_name), attr)


def get_hook(registry: str, name: str):
    """
    Resolve one entry of a hooks.py registry

    Args:
        registry: registry name, e.g. "solvers"
        name: key in that registry

    Raises:
        InvalidParameterError: unknown key
    """
    entries = getattr(hooks, registry)
    if name not in entries:
        raise InvalidParameterError(f"Unknown {registry} entry '{name}', use one of: {', '.join(entries)}")
    return get_attr(entries[name])
