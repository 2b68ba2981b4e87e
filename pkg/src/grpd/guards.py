"""Enumeration guards, optionally raised through ``GRPD_GUARD_OVERRIDE``."""

import os

from .errors import GuardExceededError

ENV_VAR = "GRPD_GUARD_OVERRIDE"


def bound(default: int) -> int:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return default
    try:
        override = int(raw)
    except ValueError:
        raise GuardExceededError(f"{ENV_VAR} is not an integer ({raw!r})", 0, default)
    return max(default, override)


def check(what: str, size: int, default: int) -> None:
    limit = bound(default)
    if size > limit:
        raise GuardExceededError(what, size, limit)
