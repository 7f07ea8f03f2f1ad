import os

DEFAULT_MAX_ENUM = 10**6
EXHAUSTIVE_STACK_LIMIT = 16


def max_enum(override=None):
    """Item-count ceiling for exhaustive enumerations.

    An explicit ``override`` wins, then the ``RLZ_MAX_ENUM`` environment
    variable, then the built-in default.
    """
    if override is not None:
        return int(override)
    value = os.environ.get("RLZ_MAX_ENUM")
    if value:
        return int(value)
    return DEFAULT_MAX_ENUM
