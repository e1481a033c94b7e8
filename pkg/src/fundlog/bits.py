"""Subsets of ``range(n)`` encoded as Python ints (bit i set iff i is a member).

Canonical listing order for families of subsets is ascending integer value.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def members(mask: int) -> Iterator[int]:
    """Yield the indices set in ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full(n: int) -> int:
    return (1 << n) - 1


def contains(mask: int, i: int) -> bool:
    return bool((mask >> i) & 1)


def subset(a: int, b: int) -> bool:
    return a & ~b == 0


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def to_list(mask: int) -> list[int]:
    return list(members(mask))


def preimage(table: tuple[int, ...] | list[int], target: int) -> int:
    """Mask of indices ``i`` with ``table[i]`` in ``target``."""
    m = 0
    for i, j in enumerate(table):
        if (target >> j) & 1:
            m |= 1 << i
    return m


def image(table: tuple[int, ...] | list[int], source: int) -> int:
    m = 0
    for i in members(source):
        m |= 1 << table[i]
    return m
