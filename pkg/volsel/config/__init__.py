"""
Settings resolution for volsel

get_settings() returns the process-wide VolselSettings record, built from
defaults and VOLSEL_<FIELD> environment overrides, cached after first use.
"""

import logging
import os
from functools import lru_cache

from volsel.constants import ERR_SETTING
from volsel.doctype.volsel_settings.volsel_settings import VolselSettings
from volsel.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

ENV_PREFIX = "VOLSEL_"


def _coerce(name: str, raw: str, kind: type):
    if kind is str:
        return raw
    try:
        return kind(raw)
    except ValueError:
        raise InvalidParameterError(
            ERR_SETTING.format(name=name, value=raw, reason=f"expected {kind.__name__}")
        )


@lru_cache(maxsize=1)
def _load() -> VolselSettings:
    overrides = {}
    for name, kind in VolselSettings.field_types().items():
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            overrides[name] = _coerce(name, raw, kind)

    if overrides:
        logger.info(f"Settings overridden from environment: {sorted(overrides)}")

    return VolselSettings(**overrides)


def get_settings(refresh: bool = False) -> VolselSettings:
    """
    Get the process-wide settings record

    Args:
        refresh: drop the cached record and re-read the environment

    Returns:
        VolselSettings: validated settings
    """
    if refresh:
        _load.cache_clear()
    return _load()
