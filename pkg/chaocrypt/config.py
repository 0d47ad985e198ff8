"""Runtime configuration read from the environment."""

import os

from .exceptions import DomainError


__all__ = [
    "THREADS_ENV",
    "thread_count",
]

#: Environment variable capping internal worker threads.
THREADS_ENV = "CHAOCRYPT_THREADS"


def thread_count():
    """
    Return the worker cap requested through the environment.

    Returns
    -------
    int or None
        The positive integer held by ``CHAOCRYPT_THREADS``, or None when the
        variable is unset or empty, in which case the executor default applies.

    """
    value = os.environ.get(THREADS_ENV, "").strip()
    if not value:
        return None
    try:
        result = int(value)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {value!r}.")
    if result < 1:
        raise DomainError(f"{THREADS_ENV} must be at least 1, got {result}.")
    return result
