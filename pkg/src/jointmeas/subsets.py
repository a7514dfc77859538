"""Gray-code subset enumeration.

Several quantities here are exact maxima over all subsets of an outcome set.
The Gray-code walk visits every bitmask while changing a single bit per step,
so a running sum of matrices can be updated with one add or subtract. Because
a subset and its complement always yield the same norm in these maxima, only
one mask of each complement pair needs to be evaluated; `canonical` marks the
first of each pair encountered, halving the expensive evaluations.
"""

from __future__ import annotations

from typing import Iterator

from .errors import SUBSET_ENUMERATION_LIMIT, CapacityError


def check_subset_capacity(n_outcomes: int, what: str) -> None:
    if n_outcomes > SUBSET_ENUMERATION_LIMIT:
        raise CapacityError(
            f"{what} enumerates all subsets of {n_outcomes} outcomes; "
            f"the supported maximum is {SUBSET_ENUMERATION_LIMIT}"
        )


def gray_walk(n: int) -> Iterator[tuple[int, int, int, bool]]:
    """Yield (mask, flipped_bit, sign, canonical) over all 2^n bitmasks.

    Starts at the empty mask (flipped_bit -1, sign 0). Consecutive masks
    differ in exactly one bit; `sign` is +1 when that bit was set, -1 when
    cleared. `canonical` is True for the first-seen member of each
    mask/complement pair (the empty mask is canonical, the full mask is not).
    """
    if n < 0:
        raise ValueError("subset size must be nonnegative")
    full = (1 << n) - 1
    seen = bytearray(1 << n)
    mask = 0
    seen[0] = 1
    yield 0, -1, 0, True
    for i in range(1, 1 << n):
        g = i ^ (i >> 1)
        flip_bit = g ^ mask
        flip = flip_bit.bit_length() - 1
        sign = 1 if g & flip_bit else -1
        mask = g
        canonical = not seen[full ^ mask]
        seen[mask] = 1
        yield mask, flip, sign, canonical


def mask_to_labels(mask: int, labels: tuple[str, ...]) -> tuple[str, ...]:
    """Labels selected by a bitmask, in the order of `labels`."""
    return tuple(lab for i, lab in enumerate(labels) if mask >> i & 1)
