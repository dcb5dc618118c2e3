"""
Integer bitsets over element indices.

A subset of {0, ..., n-1} is stored as a Python int whose bit i is set when
element i belongs to the subset. Equality of subsets is int equality.
"""

from typing import Iterable, List

import numpy as np


def from_bool_array(flags: np.ndarray) -> int:
    """Pack a boolean vector into an int bitset (bit i <-> flags[i])."""
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def from_indices(indices: Iterable[int], order: int) -> int:
    """Bitset containing the given indices."""
    flags = np.zeros(order, dtype=bool)
    idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
    if idx.size:
        flags[idx] = True
    return from_bool_array(flags)


def from_index_array(indices: np.ndarray, order: int) -> int:
    """Bitset of the values appearing in an index array."""
    flags = np.zeros(order, dtype=bool)
    flags[np.asarray(indices, dtype=np.int64).ravel()] = True
    return from_bool_array(flags)


def to_bool_array(mask: int, order: int) -> np.ndarray:
    """Unpack an int bitset into a boolean vector of length order."""
    nbytes = max(1, (order + 7) // 8)
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:order].astype(bool)


def members(mask: int) -> List[int]:
    """Sorted member indices of a bitset."""
    out = []
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        out.append(i)
        mask ^= low
    return out


def member_array(mask: int, order: int) -> np.ndarray:
    """Member indices as an int64 array."""
    return np.flatnonzero(to_bool_array(mask, order))


def full(order: int) -> int:
    """Bitset of every index below order."""
    return (1 << order) - 1


def size(mask: int) -> int:
    """Number of members."""
    return bin(mask).count("1")


def contains(mask: int, i: int) -> bool:
    return bool((mask >> i) & 1)


def is_subset(inner: int, outer: int) -> bool:
    return inner & ~outer == 0


def least(mask: int) -> int:
    """Least member index, or -1 for the empty set."""
    if not mask:
        return -1
    return (mask & -mask).bit_length() - 1


def rows_to_masks(flags: np.ndarray) -> List[int]:
    """One bitset per row of a 2-D boolean matrix."""
    packed = np.packbits(np.asarray(flags, dtype=bool), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]
