"""Burrows-Wheeler transform with a virtual end marker.

The marker is treated as a character smaller than every byte and is appended
to the block before sorting, so the transform output has one extra symbol.
Internally the marker is the value -1 and the output is an int16 array.
"""

import numpy as np

from . import _kernels as _k
from .errors import CorruptionError, ValidationError

__all__ = ["SENTINEL", "bwt_forward", "bwt_inverse", "suffix_array"]

SENTINEL = -1


def _as_bytes_array(s) -> np.ndarray:
    if isinstance(s, np.ndarray):
        return np.ascontiguousarray(s, dtype=np.uint8)
    return np.frombuffer(bytes(s), dtype=np.uint8)


def suffix_array(s) -> np.ndarray:
    """Indices of the suffixes of s in lexicographic order."""
    arr = _as_bytes_array(s)
    if arr.size == 0:
        raise ValidationError("cannot build a suffix array of an empty string")
    return _k.suffix_array_kernel(arr.astype(np.int64))


def bwt_forward(s):
    """Transform a block; returns (transformed, primary_index).

    transformed has length len(s) + 1 and contains each byte of the sorted
    rotation matrix's last column, with SENTINEL standing in for the marker;
    primary_index is the row holding the rotation that starts at offset 0.
    """
    arr = _as_bytes_array(s)
    if arr.size == 0:
        raise ValidationError("cannot transform an empty block")
    n = arr.size
    t = np.empty(n + 1, np.int64)
    t[:n] = arr
    t[:n] += 1
    t[n] = 0
    sa = _k.suffix_array_kernel(t)
    # the last column holds the character preceding each sorted rotation
    prev = (sa + n) % (n + 1)
    transformed = (t[prev] - 1).astype(np.int16)
    primary_index = int(np.flatnonzero(sa == 0)[0])
    return transformed, primary_index


def bwt_inverse(transformed, primary_index: int, sigma: int = 256) -> bytes:
    """Invert bwt_forward.  Raises CorruptionError when the pair could not
    have been produced by a forward transform."""
    data = np.ascontiguousarray(transformed, dtype=np.int64)
    n = data.size
    if n == 0:
        raise CorruptionError("transform output cannot be empty")
    if not 0 <= primary_index < n:
        raise CorruptionError(
            f"marked row {primary_index} out of range for length {n}"
        )
    markers = int(np.count_nonzero(data == SENTINEL))
    if markers != 1:
        raise CorruptionError(f"expected exactly one end marker, found {markers}")
    if data[primary_index] != SENTINEL:
        raise CorruptionError("end marker is not at the marked row")
    if int(data.max()) >= sigma:
        raise CorruptionError("symbol out of alphabet range")
    if int(data.min()) < SENTINEL:
        raise CorruptionError("symbol below alphabet range")
    return _k.bwt_inverse_kernel(data, primary_index, sigma).tobytes()
