"""Shared exception types."""

# Exact subset enumeration is 2^n work; beyond this many outcomes we refuse
# rather than silently approximate a quantity that is defined as an exact max.
SUBSET_ENUMERATION_LIMIT = 20


class CapacityError(ValueError):
    """An exact enumeration would exceed the supported problem size."""
