"""
Code-to-bin mappings: full, uniform (u2), rotation-invariant (ri) and
rotation-invariant uniform (riu2).

A code is uniform when its circular bit string has at most two 0/1
transitions. ``u2`` gives each uniform code its own bin (ascending code
order) plus one shared bin for all others. ``ri`` collapses each code's
rotation orbit onto the orbit's minimum value; bins follow the sorted
minima. ``riu2`` maps uniform codes to their number of set bits and all
others to bin ``P + 1``.
"""
from functools import lru_cache
from typing import Union

import numpy as np
import structlog

from openlbp.core.exceptions import InvalidParameterError
from openlbp.schemas.descriptor import MAX_TABLE_P, CodeMapping, MappingKind

logger = structlog.get_logger()

MIN_P, MAX_P = 4, 24

IntOrArray = Union[int, np.ndarray]


def _check_p(P: int) -> None:
    if not MIN_P <= P <= MAX_P:
        raise InvalidParameterError(
            f"P={P} outside supported range [{MIN_P}, {MAX_P}]", code="unsupported-P"
        )


def rotate_bits(code: IntOrArray, k: int, P: int) -> IntOrArray:
    """Rotate the low ``P`` bits of ``code`` left by ``k`` places."""
    k %= P
    if k == 0:
        return code
    mask = (1 << P) - 1
    return ((code << k) | (code >> (P - k))) & mask


def popcount(code: IntOrArray, P: int) -> IntOrArray:
    total = code & 1
    for bit in range(1, P):
        total = total + ((code >> bit) & 1)
    return total


def transitions(code: IntOrArray, P: int) -> IntOrArray:
    """Number of circular 0/1 changes in the ``P``-bit string of ``code``."""
    return popcount(code ^ rotate_bits(code, 1, P), P)


def min_rotation(code: IntOrArray, P: int) -> IntOrArray:
    """Smallest value over all ``P`` cyclic rotations."""
    if isinstance(code, np.ndarray):
        best = code.copy()
        for k in range(1, P):
            np.minimum(best, rotate_bits(code, k, P), out=best)
        return best
    return min(rotate_bits(code, k, P) for k in range(P))


@lru_cache(maxsize=None)
def uniform_codes(P: int) -> np.ndarray:
    """All codes with at most two circular transitions, ascending."""
    mask = (1 << P) - 1
    codes = {0, mask}
    for length in range(1, P):
        run = (1 << length) - 1
        codes.update(int(rotate_bits(run, shift, P)) for shift in range(P))
    result = np.array(sorted(codes), dtype=np.int64)
    result.setflags(write=False)
    return result


@lru_cache(maxsize=None)
def necklaces(P: int) -> np.ndarray:
    """Minimum-rotation representatives of all binary ``P``-bit orbits, ascending.

    Fredricksen-Kessler-Maiorana enumeration: prenecklaces come out in
    lexicographic (hence numeric) order and those whose period divides ``P``
    are necklaces.
    """
    bits = [0] * (P + 1)
    found = [0]
    while True:
        i = P
        while i > 0 and bits[i] == 1:
            i -= 1
        if i == 0:
            break
        bits[i] = 1
        for j in range(i + 1, P + 1):
            bits[j] = bits[j - i]
        if P % i == 0:
            value = 0
            for bit in bits[1:]:
                value = (value << 1) | bit
            found.append(value)
    result = np.array(found, dtype=np.int64)
    result.setflags(write=False)
    logger.debug("Rotation orbits enumerated", P=P, orbits=len(found))
    return result


def bin_count_for(kind: MappingKind, P: int) -> int:
    if kind == MappingKind.FULL:
        return 1 << P
    if kind == MappingKind.U2:
        return P * (P - 1) + 3
    if kind == MappingKind.RI:
        return int(necklaces(P).size)
    return P + 2


def _map_on_the_fly(kind: MappingKind, P: int, codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    if kind == MappingKind.FULL:
        return codes.copy()
    if kind == MappingKind.U2:
        table = uniform_codes(P)
        position = np.searchsorted(table, codes)
        is_uniform = transitions(codes, P) <= 2
        return np.where(is_uniform, position, table.size).astype(np.int64)
    if kind == MappingKind.RI:
        return np.searchsorted(necklaces(P), min_rotation(codes, P)).astype(np.int64)
    is_uniform = transitions(codes, P) <= 2
    return np.where(is_uniform, popcount(codes, P), P + 1).astype(np.int64)


def build_code_mapping(kind: Union[MappingKind, str], P: int) -> CodeMapping:
    """Build the code-to-bin mapping of ``kind`` for ``P``-bit codes."""
    kind = MappingKind(kind)
    _check_p(P)
    if kind == MappingKind.FULL and P > MAX_TABLE_P:
        raise InvalidParameterError(
            f"full histograms need P <= {MAX_TABLE_P} (2^{P} bins requested)",
            code="unsupported-P",
        )
    bins = bin_count_for(kind, P)
    table = None
    if P <= MAX_TABLE_P:
        table = _map_on_the_fly(kind, P, np.arange(1 << P, dtype=np.int64))
    return CodeMapping(kind=kind, P=P, table=table, bin_count=bins)


def map_codes(mapping: CodeMapping, codes: IntOrArray) -> np.ndarray:
    """Bin index of every code."""
    codes = np.asarray(codes, dtype=np.int64)
    if mapping.table is not None:
        return mapping.table[codes]
    return _map_on_the_fly(mapping.kind, mapping.P, codes)
